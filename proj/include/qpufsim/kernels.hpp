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

// In-place kernels acting on a few qubits of a dense 2^n x 2^n operator.
// Qubit 0 is the most significant bit of the basis index. Local matrices list
// their qubits most-significant first, matching embed_operator.

#include <cstddef>
#include <span>
#include <vector>

#include "qpufsim/linalg.hpp"

namespace qpufsim {

/// Basis-index bookkeeping for a local support: offsets[a] is the global bit
/// pattern of local index a, bases enumerates indices with the support bits cleared.
struct LocalIndex {
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> bases;
};

LocalIndex local_index(std::span<const std::size_t> qubits, std::size_t n_qubits);

/// m <- A m, with A acting on `qubits`.
void apply_left(ComplexMatrix& m, const ComplexMatrix& a, std::span<const std::size_t> qubits, std::size_t n_qubits);

/// m <- m A^dagger, with A acting on `qubits`.
void apply_right_adjoint(ComplexMatrix& m, const ComplexMatrix& a, std::span<const std::size_t> qubits,
                         std::size_t n_qubits);

/// rho <- U rho U^dagger.
void conjugate(ComplexMatrix& rho, const ComplexMatrix& u, std::span<const std::size_t> qubits, std::size_t n_qubits);

/// rho <- S(rho) for a local superoperator in row-major vectorization,
/// vec(A X B) = (A kron B^T) vec(X).
void apply_superop(ComplexMatrix& rho, const ComplexMatrix& superop, std::span<const std::size_t> qubits,
                   std::size_t n_qubits);

/// psi <- U psi.
void apply_to_vector(ComplexVector& psi, const ComplexMatrix& u, std::span<const std::size_t> qubits,
                     std::size_t n_qubits);

/// Sum_k K kron conj(K).
ComplexMatrix kraus_superop(const std::vector<ComplexMatrix>& ops);

/// Zeroes every coherence between basis states that differ on `qubits`.
void dephase(ComplexMatrix& rho, std::span<const std::size_t> qubits, std::size_t n_qubits);

/// Keeps only the block where `qubits` read `outcome` (most significant first); other entries are zeroed.
void project(ComplexMatrix& rho, std::span<const std::size_t> qubits, std::size_t outcome, std::size_t n_qubits);

}  // namespace qpufsim
