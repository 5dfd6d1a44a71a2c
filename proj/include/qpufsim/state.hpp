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

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qpufsim/linalg.hpp"

namespace qpufsim {

inline constexpr double kStateTolerance = 1e-10;

class PureState {
  public:
    /// Validates normalization within 1e-12.
    static PureState from_amplitudes(ComplexVector amplitudes);
    /// Computational basis state, qubit 0 leftmost.
    static PureState basis(std::string_view bits);

    std::size_t n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
    const ComplexVector& amplitudes() const { return amplitudes_; }

  private:
    PureState(std::size_t n, ComplexVector amplitudes) : n_qubits_(n), amplitudes_(std::move(amplitudes)) {}
    std::size_t n_qubits_;
    ComplexVector amplitudes_;
};

/// Hermitian, PSD, unit-trace operator on n qubits.
class DensityMatrix {
  public:
    /// The zero-qubit state [1].
    DensityMatrix();

    /// Checks Hermiticity, trace and eigenvalues against `tol`; throws std::invalid_argument.
    static DensityMatrix from_matrix(ComplexMatrix mat, double tol = kStateTolerance);
    /// No validation. For states produced by trusted CPTP kernels.
    static DensityMatrix unchecked(ComplexMatrix mat);

    static DensityMatrix basis_state(std::string_view bits);
    static DensityMatrix zero_state(std::size_t n_qubits);
    static DensityMatrix maximally_mixed(std::size_t n_qubits);
    static DensityMatrix from_pure(const PureState& psi);

    std::size_t n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return static_cast<std::size_t>(mat_.rows()); }
    const ComplexMatrix& matrix() const { return mat_; }
    Complex operator()(std::size_t row, std::size_t col) const { return at(mat_, row, col); }

    /// Diagonal as a probability vector (negative roundoff clipped to zero).
    RealVector probabilities() const;

  private:
    DensityMatrix(std::size_t n, ComplexMatrix mat) : n_qubits_(n), mat_(std::move(mat)) {}
    std::size_t n_qubits_;
    ComplexMatrix mat_;
};

/// Throws std::invalid_argument describing the first violated invariant.
void validate_density(const ComplexMatrix& mat, double tol = kStateTolerance);

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced state on `keep`; output qubits follow ascending index order.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);

/// Output qubit k is input qubit order[k]. `order` must be a permutation.
DensityMatrix permute_qubits(const DensityMatrix& rho, std::span<const std::size_t> order);
ComplexMatrix permute_qubits(const ComplexMatrix& mat, std::span<const std::size_t> order, std::size_t n_qubits);

/// (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
/// Half the trace norm of rho - sigma.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
double purity(const DensityMatrix& rho);

struct MeasurementBranch {
    std::string bits;  // outcome on the measured qubits, in the order given
    double probability;
    DensityMatrix post_state;
};

/// Projective computational-basis measurement; branches with p < 1e-14 are
/// dropped and the rest are ordered by ascending outcome string.
std::vector<MeasurementBranch> measure(const DensityMatrix& rho, std::span<const std::size_t> qubits);

inline constexpr double kBranchCutoff = 1e-14;

/// Bitstring of basis index `index` on n qubits, qubit 0 leftmost.
std::string index_to_bits(std::size_t index, std::size_t n_bits);
std::size_t bits_to_index(std::string_view bits);

}  // namespace qpufsim
