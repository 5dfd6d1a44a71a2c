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

#include "qpufsim/lindblad.hpp"
#include "qpufsim/random.hpp"

namespace qpufsim {

TrajectoryResult evolve_trajectories(const LindbladGenerator& gen, const PureState& psi0, double t,
                                     std::size_t n_steps, std::size_t n_traj, std::uint64_t seed) {
    if (psi0.dim() != gen.dim()) {
        throw std::invalid_argument("initial state dimension does not match generator");
    }
    if (n_steps == 0 || n_traj == 0 || !(t >= 0.0)) {
        throw std::invalid_argument("trajectories need n_steps > 0, n_traj > 0 and t >= 0");
    }
    const double dt = t / static_cast<double>(n_steps);
    const auto d = static_cast<Eigen::Index>(gen.dim());

    ComplexMatrix decay = ComplexMatrix::Zero(d, d);
    for (const auto& j : gen.jumps()) {
        decay.noalias() += j.op.adjoint() * j.op;
    }
    const RealVector rates = hermitian_eigenvalues(decay);
    const double lambda = rates.size() ? rates.maxCoeff() : 0.0;
    if (dt * lambda > 0.1) {
        throw std::invalid_argument("trajectory step too coarse: dt * max decay rate = " + std::to_string(dt * lambda) +
                                    " exceeds 0.1");
    }
    const ComplexMatrix u_eff = expm(ComplexMatrix(-kI * dt * effective_hamiltonian(gen)));

    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    RealMatrix sum_sq = RealMatrix::Zero(d, d);
    std::uint64_t jumps_total = 0;
    std::vector<double> weights(gen.jumps().size());

    for (std::size_t k = 0; k < n_traj; ++k) {
        Rng rng(hash64(seed, "traj", k));
        ComplexVector psi = psi0.amplitudes();
        for (std::size_t s = 0; s < n_steps; ++s) {
            ComplexVector next = u_eff * psi;
            const double keep = next.squaredNorm();
            if (!gen.jumps().empty() && rng.uniform() >= keep) {
                double total = 0.0;
                for (std::size_t j = 0; j < weights.size(); ++j) {
                    weights[j] = (gen.jumps()[j].op * psi).squaredNorm();
                    total += weights[j];
                }
                if (total > 0.0) {
                    double u = rng.uniform() * total;
                    std::size_t pick = weights.size() - 1;
                    for (std::size_t j = 0; j < weights.size(); ++j) {
                        if (u < weights[j]) {
                            pick = j;
                            break;
                        }
                        u -= weights[j];
                    }
                    next = gen.jumps()[pick].op * psi;
                    ++jumps_total;
                }
            }
            psi = next / next.norm();
        }
        const ComplexMatrix proj = psi * psi.adjoint();
        sum += proj;
        sum_sq += proj.cwiseAbs2();
    }

    const double nt = static_cast<double>(n_traj);
    ComplexMatrix mean = sum / nt;
    RealMatrix se(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            const double var = std::max(0.0, sum_sq(i, j) / nt - std::norm(mean(i, j)));
            se(i, j) = std::sqrt(var / nt);
        }
    }
    return {DensityMatrix::unchecked(std::move(mean)), std::move(se), n_traj, jumps_total};
}

}  // namespace qpufsim
