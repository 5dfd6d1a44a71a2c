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
#include <vector>

#include "qpufsim/linalg.hpp"
#include "qpufsim/state.hpp"

namespace qpufsim {

inline constexpr double kCompletenessTolerance = 1e-10;

/// CPTP map in Kraus form, E(rho) = sum_k E_k rho E_k^dagger.
class KrausChannel {
  public:
    /// Throws std::invalid_argument when ops is empty, shapes disagree, or
    /// ||sum E^dagger E - I||_F exceeds tol.
    explicit KrausChannel(std::vector<ComplexMatrix> ops, double tol = kCompletenessTolerance);

    static KrausChannel identity(std::size_t dim);
    static KrausChannel unitary(const ComplexMatrix& u);

    std::size_t dim_in() const { return static_cast<std::size_t>(ops_.front().cols()); }
    std::size_t dim_out() const { return static_cast<std::size_t>(ops_.front().rows()); }
    const std::vector<ComplexMatrix>& kraus_ops() const { return ops_; }

    /// ||sum E^dagger E - I||_F.
    double completeness_defect() const;

  private:
    std::vector<ComplexMatrix> ops_;
};

double completeness_defect(const std::vector<ComplexMatrix>& ops);

KrausChannel amplitude_damping(double gamma);
KrausChannel phase_damping(double q);
KrausChannel depolarizing(double p);

/// outer after inner; Kraus set {outer_j inner_k}.
KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner);

/// Single-qubit channel placed on `qubit` of an n-qubit register.
KrausChannel embed(const KrausChannel& local, std::size_t qubit, std::size_t n_qubits);

DensityMatrix apply(const KrausChannel& channel, const DensityMatrix& rho);

/// Applies a channel acting on `qubits` of rho without building the embedded operators.
DensityMatrix apply_local(const KrausChannel& channel, const DensityMatrix& rho, std::span<const std::size_t> qubits);

/// Row-major superoperator sum_k E_k kron conj(E_k).
ComplexMatrix superoperator(const KrausChannel& channel);

/// J = sum_ij E(|i><j|) kron |i><j|; the output system is the first factor.
struct ChoiMatrix {
    std::size_t dim = 0;
    ComplexMatrix J;
};

ChoiMatrix choi(const KrausChannel& channel);

/// E(rho) = Tr_in[J (I kron rho^T)].
ComplexMatrix apply_choi(const ChoiMatrix& choi, const ComplexMatrix& rho);

/// Tr_out J as a dim x dim matrix.
ComplexMatrix choi_input_marginal(const ChoiMatrix& choi);

/// max(||Tr_out J - I||_F, -lambda_min(J)); zero for an exact CPTP Choi matrix.
double choi_cptp_defect(const ChoiMatrix& choi);

/// Half the trace norm of J1 - J2 divided by dim. A lower-bound proxy for the
/// diamond distance, not the diamond norm itself.
double choi_distance_proxy(const ChoiMatrix& a, const ChoiMatrix& b);

/// 2 sqrt(1 - |Tr(U^dagger V)|^2 / d^2). Throws on non-unitary input (defect > 1e-8).
double unitary_distinguishability(const ComplexMatrix& u, const ComplexMatrix& v);

/// Column-stochastic readout confusion matrix, R(b | b') at row b, column b'.
class ReadoutMatrix {
  public:
    /// Validates entries in [0, 1] and column sums within 1e-12.
    static ReadoutMatrix from_matrix(RealMatrix r);
    /// Independent symmetric flips per bit, tensored with bit 0 most significant.
    static ReadoutMatrix symmetric_flips(std::span<const double> flip_probabilities);
    static ReadoutMatrix identity(std::size_t n_bits);

    std::size_t n_bits() const { return n_bits_; }
    const RealMatrix& matrix() const { return r_; }
    /// Per-bit flip probabilities when built by symmetric_flips, else empty.
    const std::vector<double>& flip_probabilities() const { return flips_; }

  private:
    ReadoutMatrix(std::size_t n, RealMatrix r, std::vector<double> flips)
        : n_bits_(n), r_(std::move(r)), flips_(std::move(flips)) {}
    std::size_t n_bits_;
    RealMatrix r_;
    std::vector<double> flips_;
};

/// p_meas(b) = sum_b' R(b|b') p(b'). Throws when p does not sum to 1 within 1e-9.
RealVector apply_readout(const ReadoutMatrix& r, const RealVector& p);

}  // namespace qpufsim
