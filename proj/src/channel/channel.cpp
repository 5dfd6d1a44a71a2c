// Copyright 2026 The qpufsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qpufsim/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "qpufsim/kernels.hpp"

namespace qpufsim {

namespace {

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " parameter " + std::to_string(p) + " outside [0, 1]");
    }
}

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
    ComplexMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

}  // namespace

double completeness_defect(const std::vector<ComplexMatrix>& ops) {
    if (ops.empty()) {
        return std::numeric_limits<double>::infinity();
    }
    ComplexMatrix sum = ComplexMatrix::Zero(ops.front().cols(), ops.front().cols());
    for (const auto& k : ops) {
        sum.noalias() += k.adjoint() * k;
    }
    return (sum - qpufsim::identity(static_cast<std::size_t>(sum.rows()))).norm();
}

KrausChannel::KrausChannel(std::vector<ComplexMatrix> ops, double tol) : ops_(std::move(ops)) {
    if (ops_.empty()) {
        throw std::invalid_argument("Kraus channel needs at least one operator");
    }
    for (const auto& k : ops_) {
        if (k.rows() != ops_.front().rows() || k.cols() != ops_.front().cols() || k.size() == 0) {
            throw std::invalid_argument("Kraus operators have inconsistent shapes");
        }
    }
    const double defect = qpufsim::completeness_defect(ops_);
    if (!(defect <= tol)) {
        throw std::invalid_argument("Kraus set violates completeness (defect " + std::to_string(defect) + ")");
    }
}

KrausChannel KrausChannel::identity(std::size_t dim) { return KrausChannel({qpufsim::identity(dim)}); }

KrausChannel KrausChannel::unitary(const ComplexMatrix& u) { return KrausChannel({u}); }

double KrausChannel::completeness_defect() const { return qpufsim::completeness_defect(ops_); }

KrausChannel amplitude_damping(double gamma) {
    check_probability(gamma, "amplitude damping");
    return KrausChannel({mat2(1.0, 0.0, 0.0, std::sqrt(1.0 - gamma)), mat2(0.0, std::sqrt(gamma), 0.0, 0.0)});
}

KrausChannel phase_damping(double q) {
    check_probability(q, "phase damping");
    return KrausChannel({std::sqrt(1.0 - q) * qpufsim::identity(2), std::sqrt(q) * pauli_matrix(Pauli::Z)});
}

KrausChannel depolarizing(double p) {
    check_probability(p, "depolarizing");
    const double s = std::sqrt(p / 3.0);
    return KrausChannel({std::sqrt(1.0 - p) * qpufsim::identity(2), s * pauli_matrix(Pauli::X),
                         s * pauli_matrix(Pauli::Y), s * pauli_matrix(Pauli::Z)});
}

KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner) {
    if (outer.dim_in() != inner.dim_out()) {
        throw std::invalid_argument("cannot compose channels: dimension mismatch");
    }
    std::vector<ComplexMatrix> ops;
    ops.reserve(outer.kraus_ops().size() * inner.kraus_ops().size());
    for (const auto& a : outer.kraus_ops()) {
        for (const auto& b : inner.kraus_ops()) {
            ops.push_back(a * b);
        }
    }
    return KrausChannel(std::move(ops), 1e-9);
}

KrausChannel embed(const KrausChannel& local, std::size_t qubit, std::size_t n_qubits) {
    if (local.dim_in() != 2 || local.dim_out() != 2) {
        throw std::invalid_argument("embed expects a single-qubit channel");
    }
    if (qubit >= n_qubits) {
        throw std::out_of_range("qubit " + std::to_string(qubit) + " out of range for " + std::to_string(n_qubits) +
                                " qubits");
    }
    std::vector<ComplexMatrix> ops;
    for (const auto& k : local.kraus_ops()) {
        ops.push_back(embed_operator(k, qubit, n_qubits));
    }
    return KrausChannel(std::move(ops), 1e-9);
}

DensityMatrix apply(const KrausChannel& channel, const DensityMatrix& rho) {
    if (channel.dim_in() != rho.dim()) {
        throw std::invalid_argument("channel input dimension " + std::to_string(channel.dim_in()) +
                                    " does not match state dimension " + std::to_string(rho.dim()));
    }
    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(channel.dim_out()),
                                            static_cast<Eigen::Index>(channel.dim_out()));
    for (const auto& k : channel.kraus_ops()) {
        out.noalias() += k * rho.matrix() * k.adjoint();
    }
    return DensityMatrix::unchecked(std::move(out));
}

DensityMatrix apply_local(const KrausChannel& channel, const DensityMatrix& rho, std::span<const std::size_t> qubits) {
    if (channel.dim_in() != channel.dim_out() || channel.dim_in() != dim_for_qubits(qubits.size())) {
        throw std::invalid_argument("local channel dimension does not match its support");
    }
    ComplexMatrix m = rho.matrix();
    apply_superop(m, superoperator(channel), qubits, rho.n_qubits());
    return DensityMatrix::unchecked(std::move(m));
}

ComplexMatrix superoperator(const KrausChannel& channel) { return kraus_superop(channel.kraus_ops()); }

ChoiMatrix choi(const KrausChannel& channel) {
    if (channel.dim_in() != channel.dim_out()) {
        throw std::invalid_argument("Choi matrix requires a square channel");
    }
    const std::size_t d = channel.dim_in();
    const auto dd = static_cast<Eigen::Index>(d * d);
    ComplexVector omega = ComplexVector::Zero(dd);
    for (std::size_t i = 0; i < d; ++i) {
        omega(static_cast<Eigen::Index>(i * d + i)) = 1.0;
    }
    ComplexMatrix j = ComplexMatrix::Zero(dd, dd);
    const ComplexMatrix id = qpufsim::identity(d);
    for (const auto& k : channel.kraus_ops()) {
        const ComplexVector v = kron(k, id) * omega;
        j.noalias() += v * v.adjoint();
    }
    return {d, std::move(j)};
}

ComplexMatrix apply_choi(const ChoiMatrix& c, const ComplexMatrix& rho) {
    const auto d = static_cast<Eigen::Index>(c.dim);
    if (rho.rows() != d || rho.cols() != d) {
        throw std::invalid_argument("state dimension does not match Choi matrix");
    }
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
            Complex acc = 0.0;
            for (Eigen::Index i = 0; i < d; ++i) {
                for (Eigen::Index k = 0; k < d; ++k) {
                    acc += c.J(a * d + i, b * d + k) * rho(i, k);
                }
            }
            out(a, b) = acc;
        }
    }
    return out;
}

ComplexMatrix choi_input_marginal(const ChoiMatrix& c) {
    const auto d = static_cast<Eigen::Index>(c.dim);
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index k = 0; k < d; ++k) {
            Complex acc = 0.0;
            for (Eigen::Index a = 0; a < d; ++a) {
                acc += c.J(a * d + i, a * d + k);
            }
            m(i, k) = acc;
        }
    }
    return m;
}

double choi_cptp_defect(const ChoiMatrix& c) {
    const double tp = (choi_input_marginal(c) - qpufsim::identity(c.dim)).norm();
    const double min_eig = hermitian_eigenvalues(c.J).minCoeff();
    return std::max({tp, -min_eig, max_hermitian_defect(c.J)});
}

double choi_distance_proxy(const ChoiMatrix& a, const ChoiMatrix& b) {
    if (a.dim != b.dim) {
        throw std::invalid_argument("Choi matrices have different dimensions");
    }
    return 0.5 * trace_norm(a.J - b.J) / static_cast<double>(a.dim);
}

double unitary_distinguishability(const ComplexMatrix& u, const ComplexMatrix& v) {
    if (u.rows() != v.rows() || u.cols() != v.cols()) {
        throw std::invalid_argument("unitaries have different dimensions");
    }
    if (unitarity_defect(u) > 1e-8 || unitarity_defect(v) > 1e-8) {
        throw std::invalid_argument("unitary_distinguishability requires unitary inputs");
    }
    const double d = static_cast<double>(u.rows());
    const double overlap = std::norm((u.adjoint() * v).trace()) / (d * d);
    return 2.0 * std::sqrt(std::max(0.0, 1.0 - overlap));
}

}  // namespace qpufsim
