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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "oracles.hpp"
#include "qpufsim/lindblad.hpp"

using namespace qpufsim;

namespace {

DensityMatrix dm(const ComplexMatrix& m) { return DensityMatrix::from_matrix(m); }

LindbladGenerator ad_dephasing_collective(double g_ad, double g_phi, double g_col) {
    std::vector<JumpOperator> js = {jump_amplitude_damping(0, 2, g_ad), jump_amplitude_damping(1, 2, 0.5 * g_ad),
                                    jump_dephasing(0, 2, g_phi), jump_dephasing(1, 2, 1.5 * g_phi),
                                    jump_collective(Pauli::Z, default_collective_coeffs(2), 2, g_col)};
    ComplexMatrix h = 0.4 * oracle::kron(oracle::X(), oracle::I2()) + 0.3 * oracle::kron(oracle::I2(), oracle::X());
    return LindbladGenerator(2, h, std::move(js));
}

// Independent dense oracle: Liouvillian assembled from column-stacking with plain Kronecker products.
ComplexMatrix oracle_evolve(const LindbladGenerator& g, const ComplexMatrix& rho, double t) {
    const Eigen::Index d = rho.rows();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    const Complex i(0, 1);
    const ComplexMatrix& h = g.hamiltonian();
    ComplexMatrix L = -i * (oracle::kron(id, h) - oracle::kron(h.transpose(), id));
    for (const auto& j : g.jumps()) {
        const ComplexMatrix& a = j.op;
        const ComplexMatrix ada = a.adjoint() * a;
        L += oracle::kron(a.conjugate(), a) - 0.5 * oracle::kron(id, ada) - 0.5 * oracle::kron(ada.transpose(), id);
    }
    // vec by columns
    ComplexVector v(d * d);
    for (Eigen::Index c = 0; c < d; ++c) v.segment(c * d, d) = rho.col(c);
    const ComplexMatrix tl = t * L;
    const ComplexVector w = tl.exp() * v;
    ComplexMatrix out(d, d);
    for (Eigen::Index c = 0; c < d; ++c) out.col(c) = w.segment(c * d, d);
    return out;
}

}  // namespace

TEST(Jumps, Definitions) {
    const double g = 0.3;
    const auto j = jump_amplitude_damping(0, 1, g);
    EXPECT_LT(oracle::max_abs(j.op - std::sqrt(g) * oracle::ket_bra(0, 1)), 1e-15);
    const auto j2 = jump_amplitude_damping(0, 2, g);
    EXPECT_LT(oracle::max_abs(j2.op - std::sqrt(g) * oracle::kron(oracle::ket_bra(0, 1), oracle::I2())), 1e-15);
    EXPECT_LT(oracle::max_abs(jump_amplitude_damping(0, 1, 0.0).op), 1e-15);

    const auto c = jump_collective(Pauli::Z, {1.0, 1.0}, 2, 1.0);
    EXPECT_LT(oracle::max_abs(c.op - (oracle::kron(oracle::Z(), oracle::I2()) + oracle::kron(oracle::I2(), oracle::Z()))),
              1e-15);
    EXPECT_LT(oracle::max_abs(jump_collective(Pauli::Z, {0.0, 0.0}, 2, 1.0).op), 1e-15);
    EXPECT_LT(oracle::max_abs(jump_collective(Pauli::X, {1.0, 0.0}, 2, 1.0).op - oracle::kron(oracle::X(), oracle::I2())),
              1e-15);

    const auto p = jump_pairwise(Pauli::Z, {{0, 2, 1.0}}, 3, 0.25);
    const ComplexMatrix zz = oracle::kron(oracle::kron(oracle::Z(), oracle::I2()), oracle::Z());
    EXPECT_LT(oracle::max_abs(p.op - 0.5 * zz), 1e-15);
}

TEST(Jumps, DefaultCoefficients) {
    const auto c = default_collective_coeffs(4);
    ASSERT_EQ(c.size(), 4u);
    for (double x : c) EXPECT_NEAR(x, 0.5, 1e-15);
    const auto p = default_pairwise_coeffs(4);
    ASSERT_EQ(p.size(), 6u);
    for (const auto& x : p) EXPECT_NEAR(x.c, 1.0 / std::sqrt(6.0), 1e-15);
}

TEST(EffectiveHamiltonian, Examples) {
    const double g = 0.7;
    const LindbladGenerator ad(1, ComplexMatrix::Zero(2, 2), {jump_amplitude_damping(0, 1, g)});
    EXPECT_LT(oracle::max_abs(effective_hamiltonian(ad) - Complex(0, -0.5 * g) * oracle::ket_bra(1, 1)), 1e-15);
    const ComplexMatrix h = 0.2 * oracle::X();
    EXPECT_LT(oracle::max_abs(effective_hamiltonian(LindbladGenerator(1, h)) - h), 1e-15);
    const LindbladGenerator split(1, h, {jump_amplitude_damping(0, 1, g / 2), jump_amplitude_damping(0, 1, g / 2)});
    const LindbladGenerator one(1, h, {jump_amplitude_damping(0, 1, g)});
    EXPECT_LT(oracle::max_abs(effective_hamiltonian(split) - effective_hamiltonian(one)), 1e-15);
}

TEST(SmallStepKraus, DefectBeforeRenormalization) {
    const double g = 0.1, dt = 0.01;
    const LindbladGenerator ad(1, ComplexMatrix::Zero(2, 2), {jump_amplitude_damping(0, 1, g)});
    const auto raw = small_step_kraus_raw(ad, dt);
    ComplexMatrix s = ComplexMatrix::Zero(2, 2);
    for (const auto& k : raw) s += k.adjoint() * k;
    EXPECT_NEAR((s - oracle::I2())(1, 1).real(), 0.25 * g * g * dt * dt, 1e-15);
    const auto fixed = small_step_kraus(ad, dt);
    EXPECT_LT(fixed.completeness_defect(), 1e-12);
}

TEST(SmallStepKraus, LimitsAndCptp) {
    const LindbladGenerator zero = LindbladGenerator::zero(2);
    const auto id = small_step_kraus(zero, 0.1);
    std::mt19937_64 rng(3);
    const ComplexMatrix rho = oracle::random_density(4, rng);
    EXPECT_LT(oracle::max_abs(apply(id, dm(rho)).matrix() - rho), 1e-15);
    const auto g = ad_dephasing_collective(0.3, 0.2, 0.1);
    for (double dt : {1e-1, 1e-2, 1e-4}) {
        const auto k = small_step_kraus(g, dt);
        EXPECT_LT(k.completeness_defect(), 1e-10);
        for (int t = 0; t < 10; ++t) {
            EXPECT_TRUE(oracle::is_valid_state(apply(k, dm(oracle::random_density(4, rng))).matrix(), 1e-10));
        }
    }
    EXPECT_LT(oracle::max_abs(apply(small_step_kraus(g, 1e-9), dm(rho)).matrix() - rho), 1e-7);
}

TEST(DenseOracle, ClosedForms) {
    const LindbladGenerator ad(1, ComplexMatrix::Zero(2, 2), {jump_amplitude_damping(0, 1, 1.0)});
    const auto out = evolve_dense(ad, DensityMatrix::basis_state("1"), 0.5);
    EXPECT_NEAR(out(1, 1).real(), std::exp(-0.5), 1e-9);
    EXPECT_NEAR(out(1, 1).real(), 0.606531, 1e-6);

    const double g = 0.35, t = 1.3;
    const LindbladGenerator deph(1, ComplexMatrix::Zero(2, 2), {jump_dephasing(0, 1, g)});
    const auto plus = evolve_dense(deph, DensityMatrix::from_matrix(ComplexMatrix::Constant(2, 2, 0.5)), t);
    EXPECT_NEAR(plus(0, 1).real(), 0.5 * std::exp(-2 * g * t), 1e-12);

    EXPECT_LT(oracle::max_abs(liouvillian_dense(LindbladGenerator::zero(2))), 1e-15);
}

TEST(DenseOracle, MatchesIndependentColumnStackedOracle) {
    std::mt19937_64 rng(5);
    const auto g = ad_dephasing_collective(0.4, 0.25, 0.3);
    const ComplexMatrix rho = oracle::random_density(4, rng);
    EXPECT_LT(oracle::max_abs(evolve_dense(g, dm(rho), 0.8).matrix() - oracle_evolve(g, rho, 0.8)), 1e-10);
}

TEST(DenseOracle, SemigroupAndTrace) {
    std::mt19937_64 rng(7);
    const auto g = ad_dephasing_collective(0.4, 0.25, 0.3);
    const auto rho = dm(oracle::random_density(4, rng));
    const auto a = evolve_dense(g, evolve_dense(g, rho, 0.3), 0.5);
    const auto b = evolve_dense(g, rho, 0.8);
    EXPECT_LT(oracle::max_abs(a.matrix() - b.matrix()), 1e-9);
    EXPECT_NEAR(b.matrix().trace().real(), 1.0, 1e-9);
}

TEST(DenseOracle, PurityNonIncreasingUnderHermitianJumps) {
    // Hermitian jumps make the semigroup unital, so purity can only fall.
    const LindbladGenerator ad(2, oracle::kron(oracle::Z(), oracle::X()),
                               {jump_dephasing(0, 2, 0.6), jump_dephasing(1, 2, 0.2),
                                jump_collective(Pauli::X, {1.0, 0.5}, 2, 0.3)});
    std::mt19937_64 rng(9);
    auto rho = dm(oracle::random_density(4, rng, 1));
    double last = purity(rho);
    for (int k = 0; k < 40; ++k) {
        rho = evolve_dense(ad, rho, 0.05);
        const double p = purity(rho);
        EXPECT_LE(p, 1.0 + 1e-9);
        EXPECT_LE(p, last + 1e-9);
        last = p;
    }
}

TEST(Trotter, CommutingSplitIsExact) {
    std::vector<JumpOperator> js;
    for (std::size_t q = 0; q < 3; ++q) js.push_back(jump_dephasing(q, 3, 0.1 + 0.2 * q));
    const LindbladGenerator g(3, ComplexMatrix::Zero(8, 8), std::move(js));
    std::mt19937_64 rng(11);
    const auto rho = dm(oracle::random_density(8, rng));
    const auto ref = evolve_dense(g, rho, 1.0);
    for (std::size_t r : {1u, 3u, 10u}) {
        for (int order : {1, 2}) {
            const auto out = evolve_trotter(g, rho, {order, 1.0, r});
            EXPECT_LT(oracle::max_abs(out.matrix() - ref.matrix()), 1e-10);
        }
    }
}

TEST(Trotter, ErrorRatiosOnSingleQubit) {
    const LindbladGenerator g(1, 0.8 * oracle::X(), {jump_amplitude_damping(0, 1, 0.6), jump_dephasing(0, 1, 0.4)});
    const auto rho = DensityMatrix::basis_state("1");
    const auto ref = evolve_dense(g, rho, 1.0);
    auto err = [&](int order, std::size_t r) {
        return (evolve_trotter(g, rho, {order, 1.0, r}).matrix() - ref.matrix()).norm();
    };
    const double r1 = err(1, 16) / err(1, 32);
    EXPECT_GE(r1, 1.7);
    EXPECT_LE(r1, 2.3);
    const double r2 = err(2, 16) / err(2, 32);
    EXPECT_GE(r2, 3.4);
    EXPECT_LE(r2, 4.6);
}

TEST(Trotter, TracePreservedAndMatchesOracleAtDefaultSteps) {
    const auto g = ad_dephasing_collective(0.3, 0.2, 0.15);
    std::mt19937_64 rng(13);
    const auto rho = dm(oracle::random_density(4, rng));
    const std::size_t r = default_trotter_steps(1.0);
    const auto out = evolve_trotter(g, rho, {2, 1.0, r});
    EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-9);
    EXPECT_LT(oracle::max_abs(out.matrix() - evolve_dense(g, rho, 1.0).matrix()), 1e-6);
}

TEST(Trotter, DefaultStepRule) {
    EXPECT_EQ(default_trotter_steps(1.0), 1000u);
    EXPECT_EQ(default_trotter_steps(0.01), 20u);
    EXPECT_EQ(default_trotter_steps(4.0), 8000u);
}

TEST(Trotter, GroupingMustPartition) {
    const auto g = ad_dephasing_collective(0.3, 0.2, 0.15);
    const auto rho = DensityMatrix::zero_state(2);
    EXPECT_THROW(evolve_trotter(g, rho, {2, 1.0, 4}, {{0, 1}, {2}}), std::invalid_argument);
    const auto a = evolve_trotter(g, rho, {2, 1.0, 64}, {{0, 2}, {1, 3}, {4}});
    EXPECT_LT(oracle::max_abs(a.matrix() - evolve_dense(g, rho, 1.0).matrix()), 1e-3);
}

TEST(Trotter, LargeRegisterUsesFrameDiagonalFactors) {
    // 5 qubits: collective X and pairwise Y pieces are handled in their Pauli frames.
    const std::size_t n = 5;
    const Eigen::Index d = 32;
    std::vector<TrotterPiece> pieces;
    for (std::size_t q = 0; q < n; ++q) {
        pieces.push_back({{q},
                          LindbladGenerator(1, 0.05 * oracle::X(),
                                            {jump_amplitude_damping(0, 1, 0.02), jump_dephasing(0, 1, 0.03)})});
    }
    const ComplexMatrix zero = ComplexMatrix::Zero(d, d);
    pieces.push_back({{}, LindbladGenerator(n, zero, {jump_collective(Pauli::X, default_collective_coeffs(n), n, 0.04)})});
    pieces.push_back({{}, LindbladGenerator(n, zero, {jump_pairwise(Pauli::Y, default_pairwise_coeffs(n), n, 0.03)})});
    std::vector<JumpOperator> all;
    ComplexMatrix h = ComplexMatrix::Zero(d, d);
    for (std::size_t q = 0; q < n; ++q) {
        h += 0.05 * oracle::on(oracle::X(), q, n);
        all.push_back(jump_amplitude_damping(q, n, 0.02));
        all.push_back(jump_dephasing(q, n, 0.03));
    }
    all.push_back(jump_collective(Pauli::X, default_collective_coeffs(n), n, 0.04));
    all.push_back(jump_pairwise(Pauli::Y, default_pairwise_coeffs(n), n, 0.03));
    const LindbladGenerator full(n, h, all);
    std::mt19937_64 rng(17);
    const ComplexMatrix rho = oracle::random_density(d, rng);
    const TrotterPropagator prop(n, std::move(pieces), {2, 1.0, 16});
    const auto out = prop.apply(dm(rho));
    const auto ref = evolve_dense(full, dm(rho), 1.0);
    EXPECT_LT(oracle::max_abs(out.matrix() - ref.matrix()), 1e-4);
    EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-12);
}

TEST(Trajectories, DampingPopulationWithinThreeSigma) {
    const LindbladGenerator ad(1, ComplexMatrix::Zero(2, 2), {jump_amplitude_damping(0, 1, 1.0)});
    const auto res = evolve_trajectories(ad, PureState::basis("1"), 0.5, 200, 10000, 19);
    const double p = std::exp(-0.5);
    const double sigma = std::sqrt(p * (1 - p) / 10000.0);
    EXPECT_NEAR(res.estimate(1, 1).real(), p, 3 * sigma);
    EXPECT_NEAR(res.standard_error(1, 1), sigma, 0.2 * sigma);
    const auto again = evolve_trajectories(ad, PureState::basis("1"), 0.5, 200, 10000, 19);
    EXPECT_EQ(res.estimate.matrix(), again.estimate.matrix());
}

TEST(Trajectories, ZeroRatesGiveSchrodingerEvolution) {
    const ComplexMatrix h = 0.7 * oracle::X() + 0.2 * oracle::Z();
    const LindbladGenerator g(1, h, {jump_amplitude_damping(0, 1, 0.0)});
    const auto res = evolve_trajectories(g, PureState::basis("0"), 1.2, 50, 5, 1);
    const ComplexMatrix gen = Complex(0, -1.2) * h;
    const ComplexMatrix u = gen.exp();
    const ComplexMatrix want = u * oracle::basis("0") * u.adjoint();
    EXPECT_LT(oracle::max_abs(res.estimate.matrix() - want), 1e-12);
    EXPECT_EQ(res.total_jumps, 0u);
}

TEST(Trajectories, ConvergeToOracle) {
    const LindbladGenerator g(1, 0.5 * oracle::X(), {jump_amplitude_damping(0, 1, 0.8)});
    const std::size_t n = 4000;
    const auto res = evolve_trajectories(g, PureState::basis("1"), 1.0, 200, n, 23);
    const auto ref = evolve_dense(g, DensityMatrix::basis_state("1"), 1.0);
    EXPECT_LE(trace_distance(res.estimate, ref), 5.0 / std::sqrt(static_cast<double>(n)));
}
