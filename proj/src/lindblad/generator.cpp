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

#include <cmath>
#include <stdexcept>
#include <string>

#include "qpufsim/lindblad.hpp"

namespace qpufsim {

LindbladGenerator::LindbladGenerator(std::size_t n_qubits, ComplexMatrix hamiltonian, std::vector<JumpOperator> jumps)
    : n_qubits_(n_qubits), h_(std::move(hamiltonian)), jumps_(std::move(jumps)) {
    const auto d = static_cast<Eigen::Index>(dim_for_qubits(n_qubits));
    if (h_.rows() != d || h_.cols() != d) {
        throw std::invalid_argument("Hamiltonian dimension does not match " + std::to_string(n_qubits) + " qubits");
    }
    const double defect = max_hermitian_defect(h_);
    if (defect > 1e-10) {
        throw std::invalid_argument("Hamiltonian is not Hermitian (defect " + std::to_string(defect) + ")");
    }
    for (const auto& j : jumps_) {
        if (j.op.rows() != d || j.op.cols() != d) {
            throw std::invalid_argument("jump operator '" + j.label + "' has wrong dimension");
        }
        if (!(j.rate >= 0.0) || !std::isfinite(j.rate)) {
            throw std::invalid_argument("jump operator '" + j.label + "' has invalid rate");
        }
    }
}

LindbladGenerator LindbladGenerator::zero(std::size_t n_qubits) {
    const auto d = static_cast<Eigen::Index>(dim_for_qubits(n_qubits));
    return LindbladGenerator(n_qubits, ComplexMatrix::Zero(d, d));
}

namespace {

void check_rate(double gamma) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument("rate must be finite and non-negative");
    }
}

JumpOperator local_jump(const ComplexMatrix& base, std::size_t qubit, std::size_t n, double gamma, std::string label) {
    check_rate(gamma);
    if (qubit >= n) {
        throw std::out_of_range("qubit " + std::to_string(qubit) + " out of range for " + std::to_string(n) +
                                " qubits");
    }
    JumpOperator j;
    j.local = std::sqrt(gamma) * base;
    j.op = embed_operator(j.local, qubit, n);
    j.rate = gamma;
    j.label = std::move(label);
    j.support = {qubit};
    return j;
}

}  // namespace

JumpOperator jump_amplitude_damping(std::size_t qubit, std::size_t n_qubits, double gamma) {
    ComplexMatrix lowering = ComplexMatrix::Zero(2, 2);
    lowering(0, 1) = 1.0;
    return local_jump(lowering, qubit, n_qubits, gamma, "ad" + std::to_string(qubit));
}

JumpOperator jump_dephasing(std::size_t qubit, std::size_t n_qubits, double gamma) {
    return local_jump(pauli_matrix(Pauli::Z), qubit, n_qubits, gamma, "deph" + std::to_string(qubit));
}

std::array<JumpOperator, 3> jump_depolarizing_set(std::size_t qubit, std::size_t n_qubits, double kappa) {
    const std::string q = std::to_string(qubit);
    return {local_jump(pauli_matrix(Pauli::X), qubit, n_qubits, kappa, "depx" + q),
            local_jump(pauli_matrix(Pauli::Y), qubit, n_qubits, kappa, "depy" + q),
            local_jump(pauli_matrix(Pauli::Z), qubit, n_qubits, kappa, "depz" + q)};
}

JumpOperator jump_collective(Pauli a, const std::vector<double>& coeffs, std::size_t n_qubits, double gamma) {
    check_rate(gamma);
    if (coeffs.size() != n_qubits) {
        throw std::invalid_argument("collective jump needs one coefficient per qubit");
    }
    const auto d = static_cast<Eigen::Index>(dim_for_qubits(n_qubits));
    JumpOperator j;
    j.op = ComplexMatrix::Zero(d, d);
    const ComplexMatrix p = pauli_matrix(a);
    for (std::size_t i = 0; i < n_qubits; ++i) {
        if (coeffs[i] != 0.0) {
            j.op += coeffs[i] * embed_operator(p, i, n_qubits);
        }
    }
    j.op *= std::sqrt(gamma);
    j.rate = gamma;
    j.label = std::string("collective") + pauli_to_char(a);
    return j;
}

JumpOperator jump_pairwise(Pauli b, const std::vector<PairCoefficient>& coeffs, std::size_t n_qubits, double gamma) {
    check_rate(gamma);
    const auto d = static_cast<Eigen::Index>(dim_for_qubits(n_qubits));
    const ComplexMatrix bb = kron(pauli_matrix(b), pauli_matrix(b));
    JumpOperator j;
    j.op = ComplexMatrix::Zero(d, d);
    for (const auto& pc : coeffs) {
        if (pc.i >= pc.j || pc.j >= n_qubits) {
            throw std::invalid_argument("pairwise jump needs pairs i < j < n");
        }
        const std::size_t qs[2] = {pc.i, pc.j};
        j.op += pc.c * embed_operator(bb, qs, n_qubits);
    }
    j.op *= std::sqrt(gamma);
    j.rate = gamma;
    j.label = std::string("pairwise") + pauli_to_char(b);
    return j;
}

std::vector<double> default_collective_coeffs(std::size_t n_qubits) {
    return std::vector<double>(n_qubits, 1.0 / std::sqrt(static_cast<double>(n_qubits)));
}

std::vector<PairCoefficient> default_pairwise_coeffs(std::size_t n_qubits) {
    const std::size_t pairs = n_qubits * (n_qubits - 1) / 2;
    std::vector<PairCoefficient> out;
    for (std::size_t i = 0; i < n_qubits; ++i) {
        for (std::size_t j = i + 1; j < n_qubits; ++j) {
            out.push_back({i, j, 1.0 / std::sqrt(static_cast<double>(pairs))});
        }
    }
    return out;
}

ComplexMatrix effective_hamiltonian(const LindbladGenerator& gen) {
    ComplexMatrix heff = gen.hamiltonian();
    for (const auto& j : gen.jumps()) {
        heff.noalias() -= 0.5 * kI * (j.op.adjoint() * j.op);
    }
    return heff;
}

std::vector<ComplexMatrix> small_step_kraus_raw(const LindbladGenerator& gen, double dt) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("small-step Kraus map needs dt > 0");
    }
    std::vector<ComplexMatrix> ops;
    ops.push_back(identity(gen.dim()) - kI * dt * effective_hamiltonian(gen));
    for (const auto& j : gen.jumps()) {
        ops.push_back(std::sqrt(dt) * j.op);
    }
    return ops;
}

KrausChannel small_step_kraus(const LindbladGenerator& gen, double dt) {
    std::vector<ComplexMatrix> ops = small_step_kraus_raw(gen, dt);
    ComplexMatrix s = ComplexMatrix::Zero(static_cast<Eigen::Index>(gen.dim()), static_cast<Eigen::Index>(gen.dim()));
    for (const auto& k : ops) {
        s.noalias() += k.adjoint() * k;
    }
    const ComplexMatrix inv_sqrt = inverse_sqrt_pd(s);
    for (auto& k : ops) {
        k = k * inv_sqrt;
    }
    return KrausChannel(std::move(ops));
}

ComplexMatrix liouvillian_dense(const LindbladGenerator& gen) {
    const std::size_t d = gen.dim();
    if (d > 64) {
        throw GuardError("dense Liouvillian limited to d <= 64, requested d = " + std::to_string(d));
    }
    const ComplexMatrix id = identity(d);
    const ComplexMatrix& h = gen.hamiltonian();
    ComplexMatrix l = -kI * (kron(h, id) - kron(id, h.transpose()));
    for (const auto& j : gen.jumps()) {
        const ComplexMatrix ldl = j.op.adjoint() * j.op;
        l += kron(j.op, j.op.conjugate()) - 0.5 * kron(ldl, id) - 0.5 * kron(id, ldl.transpose());
    }
    return l;
}

ComplexVector vec_rows(const ComplexMatrix& m) {
    const ComplexMatrix t = m.transpose();
    return Eigen::Map<const ComplexVector>(t.data(), t.size());
}

ComplexMatrix unvec_rows(const ComplexVector& v, std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    if (v.size() != d * d) {
        throw std::invalid_argument("vector length does not match dimension");
    }
    return Eigen::Map<const ComplexMatrix>(v.data(), d, d).transpose();
}

DensityMatrix evolve_dense(const LindbladGenerator& gen, const DensityMatrix& rho, double t) {
    if (rho.dim() != gen.dim()) {
        throw std::invalid_argument("state dimension does not match generator");
    }
    const ComplexMatrix prop = expm(t * liouvillian_dense(gen));
    return DensityMatrix::unchecked(unvec_rows(prop * vec_rows(rho.matrix()), gen.dim()));
}

ComplexMatrix hamiltonian_propagator(const ComplexMatrix& h, double t) {
    return expm_hermitian(h, Complex(0.0, -t));
}

std::size_t default_trotter_steps(double t, double eps) {
    if (!(eps > 0.0) || !(t >= 0.0)) {
        throw std::invalid_argument("step rule needs t >= 0 and eps > 0");
    }
    return static_cast<std::size_t>(std::ceil(std::max(20.0, std::pow(t, 1.5) / std::sqrt(eps))));
}

}  // namespace qpufsim
