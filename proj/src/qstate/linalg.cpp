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

#include "qpufsim/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qpufsim {

Pauli pauli_from_char(char c) {
    switch (c) {
        case 'I':
        case 'i':
            return Pauli::I;
        case 'X':
        case 'x':
            return Pauli::X;
        case 'Y':
        case 'y':
            return Pauli::Y;
        case 'Z':
        case 'z':
            return Pauli::Z;
        default:
            throw std::invalid_argument(std::string("not a Pauli label: ") + c);
    }
}

char pauli_to_char(Pauli p) {
    switch (p) {
        case Pauli::I:
            return 'I';
        case Pauli::X:
            return 'X';
        case Pauli::Y:
            return 'Y';
        case Pauli::Z:
            return 'Z';
    }
    return '?';
}

ComplexMatrix identity(std::size_t dim) {
    return ComplexMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

ComplexMatrix pauli_matrix(Pauli p) {
    ComplexMatrix m(2, 2);
    switch (p) {
        case Pauli::I:
            m << 1, 0, 0, 1;
            break;
        case Pauli::X:
            m << 0, 1, 1, 0;
            break;
        case Pauli::Y:
            m << 0, -kI, kI, 0;
            break;
        case Pauli::Z:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

std::size_t dim_for_qubits(std::size_t n_qubits) {
    if (n_qubits > 30) {
        throw GuardError("qubit count " + std::to_string(n_qubits) + " exceeds dense representation limit");
    }
    return std::size_t{1} << n_qubits;
}

std::size_t qubits_for_dim(std::size_t dim) {
    if (dim == 0 || (dim & (dim - 1)) != 0) {
        throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
    }
    std::size_t n = 0;
    while ((std::size_t{1} << n) < dim) {
        ++n;
    }
    return n;
}

Complex at(const ComplexMatrix& m, std::size_t row, std::size_t col) {
    if (row >= static_cast<std::size_t>(m.rows()) || col >= static_cast<std::size_t>(m.cols())) {
        throw std::out_of_range("matrix index (" + std::to_string(row) + ", " + std::to_string(col) +
                                ") outside " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    return m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix embed_operator(const ComplexMatrix& local, std::span<const std::size_t> qubits, std::size_t n_qubits) {
    const std::size_t k = qubits.size();
    if (local.rows() != local.cols() || static_cast<std::size_t>(local.rows()) != dim_for_qubits(k)) {
        throw std::invalid_argument("local operator dimension does not match qubit count");
    }
    std::size_t mask = 0;
    for (std::size_t q : qubits) {
        if (q >= n_qubits) {
            throw std::out_of_range("qubit " + std::to_string(q) + " out of range for " + std::to_string(n_qubits) +
                                    " qubits");
        }
        const std::size_t bit = std::size_t{1} << (n_qubits - 1 - q);
        if (mask & bit) {
            throw std::invalid_argument("repeated qubit in operator support");
        }
        mask |= bit;
    }
    const std::size_t d = dim_for_qubits(n_qubits);
    const std::size_t local_dim = std::size_t{1} << k;
    std::vector<std::size_t> offsets(local_dim, 0);
    for (std::size_t a = 0; a < local_dim; ++a) {
        for (std::size_t j = 0; j < k; ++j) {
            if ((a >> (k - 1 - j)) & 1) {
                offsets[a] |= std::size_t{1} << (n_qubits - 1 - qubits[j]);
            }
        }
    }
    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t base = 0; base < d; ++base) {
        if (base & mask) {
            continue;
        }
        for (std::size_t a = 0; a < local_dim; ++a) {
            for (std::size_t b = 0; b < local_dim; ++b) {
                out(static_cast<Eigen::Index>(base | offsets[a]), static_cast<Eigen::Index>(base | offsets[b])) =
                    local(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            }
        }
    }
    return out;
}

ComplexMatrix embed_operator(const ComplexMatrix& local, std::size_t qubit, std::size_t n_qubits) {
    const std::array<std::size_t, 1> q{qubit};
    return embed_operator(local, q, n_qubits);
}

double max_hermitian_defect(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) { return max_hermitian_defect(m) <= tol; }

double unitarity_defect(const ComplexMatrix& u) {
    if (u.rows() != u.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    return (u.adjoint() * u - identity(static_cast<std::size_t>(u.rows()))).norm();
}

HermitianEigen hermitian_eigen(const ComplexMatrix& m) {
    const ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("Hermitian eigendecomposition did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
    const ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("Hermitian eigendecomposition did not converge");
    }
    return solver.eigenvalues();
}

RealVector singular_values(const ComplexMatrix& m) {
    Eigen::BDCSVD<ComplexMatrix> svd(m);
    return svd.singularValues();
}

double trace_norm(const ComplexMatrix& m) {
    if (m.rows() == m.cols() && max_hermitian_defect(m) <= 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
        return hermitian_eigenvalues(m).cwiseAbs().sum();
    }
    return singular_values(m).sum();
}

ComplexMatrix expm_hermitian(const ComplexMatrix& h, Complex scale) {
    if (!is_hermitian(h, 1e-10 * std::max(1.0, h.cwiseAbs().maxCoeff()))) {
        throw std::invalid_argument("expm_hermitian requires a Hermitian matrix");
    }
    const HermitianEigen eig = hermitian_eigen(h);
    ComplexVector phases(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        phases(i) = std::exp(scale * eig.values(i));
    }
    return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

namespace {

constexpr std::array<double, 4> kPade3{120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7{17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
constexpr std::array<double, 10> kPade9{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                                        2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kPade13{64764752532480000.0,
                                         32382376266240000.0,
                                         7771770303897600.0,
                                         1187353796428800.0,
                                         129060195264000.0,
                                         10559470521600.0,
                                         670442572800.0,
                                         33522128640.0,
                                         1323241920.0,
                                         40840800.0,
                                         960960.0,
                                         16380.0,
                                         182.0,
                                         1.0};

// Theta_m bounds from Higham (2005), table 2.3.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

double one_norm(const ComplexMatrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

template <std::size_t N>
ComplexMatrix pade_low(const ComplexMatrix& a, const std::array<double, N>& b) {
    const auto n = a.rows();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix a2 = a * a;
    ComplexMatrix power = id;
    ComplexMatrix u_inner = ComplexMatrix::Zero(n, n);
    ComplexMatrix v = ComplexMatrix::Zero(n, n);
    for (std::size_t k = 0; k + 1 < N; k += 2) {
        v += b[k] * power;
        u_inner += b[k + 1] * power;
        power = power * a2;
    }
    const ComplexMatrix u = a * u_inner;
    return (v - u).partialPivLu().solve(v + u);
}

ComplexMatrix pade13(const ComplexMatrix& a) {
    const auto n = a.rows();
    const auto& b = kPade13;
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a4 * a2;
    const ComplexMatrix u =
        a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    const ComplexMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
    return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

ComplexMatrix expm(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("expm requires a square matrix");
    }
    if (a.rows() == 0) {
        return a;
    }
    const double norm = one_norm(a);
    if (norm == 0.0) {
        return ComplexMatrix::Identity(a.rows(), a.cols());
    }
    if (norm <= kTheta3) return pade_low(a, kPade3);
    if (norm <= kTheta5) return pade_low(a, kPade5);
    if (norm <= kTheta7) return pade_low(a, kPade7);
    if (norm <= kTheta9) return pade_low(a, kPade9);
    int squarings = 0;
    if (norm > kTheta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
    }
    ComplexMatrix result = pade13(a / std::ldexp(1.0, squarings));
    for (int i = 0; i < squarings; ++i) {
        result = result * result;
    }
    return result;
}

ComplexMatrix sqrt_psd(const ComplexMatrix& m, double clamp_tol) {
    const HermitianEigen eig = hermitian_eigen(m);
    RealVector roots(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        double v = eig.values(i);
        if (v < -clamp_tol) {
            throw std::domain_error("matrix is not positive semidefinite (eigenvalue " + std::to_string(v) + ")");
        }
        roots(i) = std::sqrt(std::max(v, 0.0));
    }
    return eig.vectors * roots.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix inverse_sqrt_pd(const ComplexMatrix& m) {
    const HermitianEigen eig = hermitian_eigen(m);
    RealVector inv(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        if (eig.values(i) <= 0.0) {
            throw std::domain_error("matrix is not positive definite");
        }
        inv(i) = 1.0 / std::sqrt(eig.values(i));
    }
    return eig.vectors * inv.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

RealVector project_to_simplex(const RealVector& v) {
    // Duchi et al. sort-and-threshold.
    std::vector<double> sorted(v.data(), v.data() + v.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double threshold = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        cumulative += sorted[i];
        const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
        if (sorted[i] - t > 0.0) {
            threshold = t;
        }
    }
    RealVector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out(i) = std::max(v(i) - threshold, 0.0);
    }
    return out;
}

}  // namespace qpufsim
