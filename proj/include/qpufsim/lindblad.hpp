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

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qpufsim/channel.hpp"
#include "qpufsim/linalg.hpp"
#include "qpufsim/state.hpp"

namespace qpufsim {

/// Jump operator with its rate already folded in (op = sqrt(rate) * base).
struct JumpOperator {
    ComplexMatrix op;
    double rate = 0.0;
    std::string label;
    /// When nonempty, op equals `local` embedded on these qubits. Lets the
    /// Trotter engine evolve the factor locally.
    std::vector<std::size_t> support;
    ComplexMatrix local;
};

/// d rho/dt = -i[H, rho] + sum_a (L_a rho L_a^dagger - 1/2 {L_a^dagger L_a, rho}).
class LindbladGenerator {
  public:
    /// Throws std::invalid_argument if H is not Hermitian within 1e-10 or shapes disagree.
    LindbladGenerator(std::size_t n_qubits, ComplexMatrix hamiltonian, std::vector<JumpOperator> jumps = {});

    static LindbladGenerator zero(std::size_t n_qubits);

    std::size_t n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return static_cast<std::size_t>(h_.rows()); }
    const ComplexMatrix& hamiltonian() const { return h_; }
    const std::vector<JumpOperator>& jumps() const { return jumps_; }

  private:
    std::size_t n_qubits_;
    ComplexMatrix h_;
    std::vector<JumpOperator> jumps_;
};

JumpOperator jump_amplitude_damping(std::size_t qubit, std::size_t n_qubits, double gamma);
JumpOperator jump_dephasing(std::size_t qubit, std::size_t n_qubits, double gamma);
std::array<JumpOperator, 3> jump_depolarizing_set(std::size_t qubit, std::size_t n_qubits, double kappa);
/// sqrt(Gamma) sum_i c_i A_i.
JumpOperator jump_collective(Pauli a, const std::vector<double>& coeffs, std::size_t n_qubits, double gamma);

struct PairCoefficient {
    std::size_t i;
    std::size_t j;
    double c;
};
/// sqrt(Gamma) sum_{i<j} c_ij B_i B_j.
JumpOperator jump_pairwise(Pauli b, const std::vector<PairCoefficient>& coeffs, std::size_t n_qubits, double gamma);

/// c_i = 1/sqrt(n).
std::vector<double> default_collective_coeffs(std::size_t n_qubits);
/// Every pair i<j with c_ij = 1/sqrt(number of pairs).
std::vector<PairCoefficient> default_pairwise_coeffs(std::size_t n_qubits);

/// H - (i/2) sum_a L_a^dagger L_a.
ComplexMatrix effective_hamiltonian(const LindbladGenerator& gen);

/// K0 = I - i H dt - 1/2 sum L^dagger L dt, K_j = sqrt(dt) L_j, before renormalization.
std::vector<ComplexMatrix> small_step_kraus_raw(const LindbladGenerator& gen, double dt);

/// The raw small-step set right-multiplied by S^{-1/2}, S = sum K^dagger K, so the
/// returned channel is exactly trace preserving.
KrausChannel small_step_kraus(const LindbladGenerator& gen, double dt);

/// Row-major vectorized generator (d^2 x d^2). Throws GuardError above d = 64.
ComplexMatrix liouvillian_dense(const LindbladGenerator& gen);

/// exp(t L) applied through the dense Liouvillian.
DensityMatrix evolve_dense(const LindbladGenerator& gen, const DensityMatrix& rho, double t);

/// exp(-i H t); throws std::invalid_argument for non-Hermitian H.
ComplexMatrix hamiltonian_propagator(const ComplexMatrix& h, double t);

/// Row-major vec and its inverse.
ComplexVector vec_rows(const ComplexMatrix& m);
ComplexMatrix unvec_rows(const ComplexVector& v, std::size_t dim);

struct TrotterPlan {
    int order = 2;  // 1: Lie-Trotter, 2: Strang
    double t = 0.0;
    std::size_t r = 1;
};

/// r = ceil(max(20, t^{3/2} / sqrt(eps))).
std::size_t default_trotter_steps(double t, double eps = 1e-6);

/// One additive piece of a split generator. With a nonempty support the
/// generator acts on those qubits only (support.size() qubits); otherwise it is
/// a full-register generator.
struct TrotterPiece {
    std::vector<std::size_t> support;
    LindbladGenerator generator;
};

/// Precomputed product formula for a fixed split and plan. Each factor is the
/// exact exponential of its piece, so every factor is CPTP.
class TrotterPropagator {
  public:
    TrotterPropagator(std::size_t n_qubits, std::vector<TrotterPiece> pieces, TrotterPlan plan);
    ~TrotterPropagator();
    TrotterPropagator(TrotterPropagator&&) noexcept;
    TrotterPropagator& operator=(TrotterPropagator&&) noexcept;

    void apply(ComplexMatrix& rho) const;
    DensityMatrix apply(const DensityMatrix& rho) const;
    std::size_t n_qubits() const { return n_qubits_; }

  private:
    struct Impl;
    std::size_t n_qubits_;
    std::unique_ptr<Impl> impl_;
};

/// Hamiltonian factor first (if nonzero), then one factor per jump.
std::vector<TrotterPiece> default_split(const LindbladGenerator& gen);
/// Hamiltonian factor first, then one factor per group of jump indices. Groups
/// must partition the jump list.
std::vector<TrotterPiece> grouped_split(const LindbladGenerator& gen, const std::vector<std::vector<std::size_t>>& groups);

DensityMatrix evolve_trotter(const LindbladGenerator& gen, const DensityMatrix& rho0, const TrotterPlan& plan);
DensityMatrix evolve_trotter(const LindbladGenerator& gen, const DensityMatrix& rho0, const TrotterPlan& plan,
                             const std::vector<std::vector<std::size_t>>& grouping);

struct TrajectoryResult {
    DensityMatrix estimate;
    /// Entrywise standard error of the ensemble mean.
    RealMatrix standard_error;
    std::size_t trajectories = 0;
    std::uint64_t total_jumps = 0;
};

/// Monte Carlo wave-function unraveling. Each step applies exp(-i H_eff dt)
/// exactly; a jump happens with probability 1 - ||psi'||^2 and picks channel j
/// with weight ||L_j psi||^2. Throws std::invalid_argument when
/// dt * lambda_max(sum L^dagger L) exceeds 0.1.
TrajectoryResult evolve_trajectories(const LindbladGenerator& gen, const PureState& psi0, double t,
                                     std::size_t n_steps, std::size_t n_traj, std::uint64_t seed);

}  // namespace qpufsim
