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

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qpufsim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Raised when a request exceeds a resource guard (dimension caps, qubit limits).
class GuardError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class Pauli { I, X, Y, Z };

Pauli pauli_from_char(char c);
char pauli_to_char(Pauli p);

ComplexMatrix identity(std::size_t dim);
ComplexMatrix pauli_matrix(Pauli p);

/// Dimension 2^n for n qubits; throws GuardError past 2^30.
std::size_t dim_for_qubits(std::size_t n_qubits);

/// Inverse of dim_for_qubits; throws std::invalid_argument if dim is not a power of two.
std::size_t qubits_for_dim(std::size_t dim);

/// Bounds-checked element read.
Complex at(const ComplexMatrix& m, std::size_t row, std::size_t col);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Places `local` (acting on `qubits`, first listed qubit most significant) inside an
/// n-qubit identity. Qubit 0 is the most significant bit of the basis index.
ComplexMatrix embed_operator(const ComplexMatrix& local, std::span<const std::size_t> qubits, std::size_t n_qubits);
ComplexMatrix embed_operator(const ComplexMatrix& local, std::size_t qubit, std::size_t n_qubits);

double max_hermitian_defect(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = 1e-10);

/// ||U^dagger U - I||_F.
double unitarity_defect(const ComplexMatrix& u);

struct HermitianEigen {
    RealVector values;      // ascending
    ComplexMatrix vectors;  // columns are eigenvectors
};

/// Eigendecomposition of the Hermitian part of m.
HermitianEigen hermitian_eigen(const ComplexMatrix& m);
RealVector hermitian_eigenvalues(const ComplexMatrix& m);

RealVector singular_values(const ComplexMatrix& m);

/// Sum of singular values. Hermitian inputs take the eigenvalue path.
double trace_norm(const ComplexMatrix& m);

/// exp(scale * H) for Hermitian H via eigendecomposition.
ComplexMatrix expm_hermitian(const ComplexMatrix& h, Complex scale);

/// General matrix exponential: scaling and squaring around a degree-13 Pade approximant.
ComplexMatrix expm(const ComplexMatrix& a);

/// Principal square root of a PSD matrix. Eigenvalues in [-clamp_tol, 0) are
/// clamped to zero; more negative values throw std::domain_error.
ComplexMatrix sqrt_psd(const ComplexMatrix& m, double clamp_tol = 1e-10);

/// Inverse square root of a Hermitian positive definite matrix.
ComplexMatrix inverse_sqrt_pd(const ComplexMatrix& m);

/// Euclidean projection of a real vector onto the probability simplex.
RealVector project_to_simplex(const RealVector& v);

}  // namespace qpufsim
