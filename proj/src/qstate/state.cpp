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

#include "qpufsim/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qpufsim/kernels.hpp"

namespace qpufsim {

std::string index_to_bits(std::size_t index, std::size_t n_bits) {
    std::string s(n_bits, '0');
    for (std::size_t j = 0; j < n_bits; ++j) {
        if ((index >> (n_bits - 1 - j)) & 1) {
            s[j] = '1';
        }
    }
    return s;
}

std::size_t bits_to_index(std::string_view bits) {
    if (bits.size() > 30) {
        throw GuardError("bitstring longer than 30 bits");
    }
    std::size_t idx = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("bitstring contains '" + std::string(1, c) + "'");
        }
        idx = (idx << 1) | static_cast<std::size_t>(c == '1');
    }
    return idx;
}

PureState PureState::from_amplitudes(ComplexVector amplitudes) {
    const std::size_t n = qubits_for_dim(static_cast<std::size_t>(amplitudes.size()));
    const double norm2 = amplitudes.squaredNorm();
    if (std::abs(norm2 - 1.0) > 1e-12) {
        throw std::invalid_argument("state vector is not normalized (norm^2 = " + std::to_string(norm2) + ")");
    }
    return PureState(n, std::move(amplitudes));
}

PureState PureState::basis(std::string_view bits) {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim_for_qubits(bits.size())));
    v(static_cast<Eigen::Index>(bits_to_index(bits))) = 1.0;
    return PureState(bits.size(), std::move(v));
}

DensityMatrix::DensityMatrix() : n_qubits_(0), mat_(ComplexMatrix::Ones(1, 1)) {}

void validate_density(const ComplexMatrix& mat, double tol) {
    if (mat.rows() != mat.cols()) {
        throw std::invalid_argument("density matrix is not square");
    }
    qubits_for_dim(static_cast<std::size_t>(mat.rows()));
    const double herm = max_hermitian_defect(mat);
    if (herm > tol) {
        throw std::invalid_argument("density matrix is not Hermitian (defect " + std::to_string(herm) + ")");
    }
    const Complex tr = mat.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > tol) {
        throw std::invalid_argument("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
    }
    const double min_eig = hermitian_eigenvalues(mat).minCoeff();
    if (min_eig < -tol) {
        throw std::invalid_argument("density matrix has negative eigenvalue " + std::to_string(min_eig));
    }
}

DensityMatrix DensityMatrix::from_matrix(ComplexMatrix mat, double tol) {
    validate_density(mat, tol);
    const std::size_t n = qubits_for_dim(static_cast<std::size_t>(mat.rows()));
    return DensityMatrix(n, std::move(mat));
}

DensityMatrix DensityMatrix::unchecked(ComplexMatrix mat) {
    if (mat.rows() != mat.cols()) {
        throw std::invalid_argument("density matrix is not square");
    }
    const std::size_t n = qubits_for_dim(static_cast<std::size_t>(mat.rows()));
    return DensityMatrix(n, std::move(mat));
}

DensityMatrix DensityMatrix::basis_state(std::string_view bits) {
    const std::size_t d = dim_for_qubits(bits.size());
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    const auto i = static_cast<Eigen::Index>(bits_to_index(bits));
    m(i, i) = 1.0;
    return DensityMatrix(bits.size(), std::move(m));
}

DensityMatrix DensityMatrix::zero_state(std::size_t n_qubits) {
    return basis_state(std::string(n_qubits, '0'));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t n_qubits) {
    const std::size_t d = dim_for_qubits(n_qubits);
    return DensityMatrix(n_qubits, identity(d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    return DensityMatrix(psi.n_qubits(), psi.amplitudes() * psi.amplitudes().adjoint());
}

RealVector DensityMatrix::probabilities() const {
    RealVector p = mat_.diagonal().real();
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        p(i) = std::max(p(i), 0.0);
    }
    return p;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix::unchecked(kron(a.matrix(), b.matrix()));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
    const std::size_t n = rho.n_qubits();
    std::vector<std::size_t> kept(keep.begin(), keep.end());
    std::sort(kept.begin(), kept.end());
    if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
        throw std::invalid_argument("repeated qubit in partial_trace keep set");
    }
    for (std::size_t q : kept) {
        if (q >= n) {
            throw std::out_of_range("qubit " + std::to_string(q) + " out of range for " + std::to_string(n) + " qubits");
        }
    }
    std::vector<std::size_t> traced;
    for (std::size_t q = 0; q < n; ++q) {
        if (!std::binary_search(kept.begin(), kept.end(), q)) {
            traced.push_back(q);
        }
    }
    const LocalIndex k_idx = local_index(kept, n);
    const LocalIndex t_idx = local_index(traced, n);
    const std::size_t dk = k_idx.offsets.size();
    const ComplexMatrix& m = rho.matrix();
    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    for (std::size_t b = 0; b < dk; ++b) {
        for (std::size_t a = 0; a < dk; ++a) {
            Complex acc = 0.0;
            for (std::size_t t : t_idx.offsets) {
                acc += m(static_cast<Eigen::Index>(k_idx.offsets[a] | t), static_cast<Eigen::Index>(k_idx.offsets[b] | t));
            }
            out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
        }
    }
    return DensityMatrix::unchecked(std::move(out));
}

ComplexMatrix permute_qubits(const ComplexMatrix& mat, std::span<const std::size_t> order, std::size_t n_qubits) {
    if (order.size() != n_qubits) {
        throw std::invalid_argument("permutation length does not match qubit count");
    }
    std::vector<bool> seen(n_qubits, false);
    for (std::size_t q : order) {
        if (q >= n_qubits || seen[q]) {
            throw std::invalid_argument("qubit order is not a permutation");
        }
        seen[q] = true;
    }
    const std::size_t d = dim_for_qubits(n_qubits);
    // map[i] = input index whose bits land at output index i
    std::vector<std::size_t> map(d, 0);
    for (std::size_t i = 0; i < d; ++i) {
        std::size_t src = 0;
        for (std::size_t k = 0; k < n_qubits; ++k) {
            if ((i >> (n_qubits - 1 - k)) & 1) {
                src |= std::size_t{1} << (n_qubits - 1 - order[k]);
            }
        }
        map[i] = src;
    }
    ComplexMatrix out(mat.rows(), mat.cols());
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                mat(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j]));
        }
    }
    return out;
}

DensityMatrix permute_qubits(const DensityMatrix& rho, std::span<const std::size_t> order) {
    return DensityMatrix::unchecked(permute_qubits(rho.matrix(), order, rho.n_qubits()));
}

namespace {

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("density matrices have different dimensions (" + std::to_string(a.dim()) +
                                    " vs " + std::to_string(b.dim()) + ")");
    }
}

}  // namespace

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho, sigma);
    const ComplexMatrix s = sqrt_psd(rho.matrix());
    const ComplexMatrix inner = s * sigma.matrix() * s;
    const RealVector ev = hermitian_eigenvalues(inner);
    double root_sum = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -kStateTolerance) {
            throw std::domain_error("fidelity argument is not positive semidefinite");
        }
        root_sum += std::sqrt(std::max(ev(i), 0.0));
    }
    return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho, sigma);
    return std::clamp(0.5 * trace_norm(rho.matrix() - sigma.matrix()), 0.0, 1.0);
}

double purity(const DensityMatrix& rho) {
    // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
    return rho.matrix().squaredNorm();
}

std::vector<MeasurementBranch> measure(const DensityMatrix& rho, std::span<const std::size_t> qubits) {
    if (qubits.empty()) {
        throw std::invalid_argument("measurement needs at least one qubit");
    }
    const std::size_t n = rho.n_qubits();
    const LocalIndex idx = local_index(qubits, n);
    std::vector<MeasurementBranch> out;
    for (std::size_t outcome = 0; outcome < idx.offsets.size(); ++outcome) {
        double p = 0.0;
        for (std::size_t base : idx.bases) {
            const auto i = static_cast<Eigen::Index>(base | idx.offsets[outcome]);
            p += rho.matrix()(i, i).real();
        }
        if (p < kBranchCutoff) {
            continue;
        }
        ComplexMatrix post = rho.matrix();
        project(post, qubits, outcome, n);
        post /= p;
        out.push_back({index_to_bits(outcome, qubits.size()), p, DensityMatrix::unchecked(std::move(post))});
    }
    return out;
}

}  // namespace qpufsim
