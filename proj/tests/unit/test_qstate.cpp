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

#include <random>

#include "oracles.hpp"
#include "qpufsim/kernels.hpp"
#include "qpufsim/linalg.hpp"
#include "qpufsim/state.hpp"

using namespace qpufsim;

namespace {

DensityMatrix dm(const ComplexMatrix& m) { return DensityMatrix::from_matrix(m); }

}  // namespace

TEST(DensityMatrix, RejectsInvalidMatrices) {
    ComplexMatrix m = oracle::basis("0");
    m(0, 0) = 0.9;
    EXPECT_THROW(DensityMatrix::from_matrix(m), std::invalid_argument);
    ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    EXPECT_THROW(DensityMatrix::from_matrix(neg), std::invalid_argument);
    ComplexMatrix nonherm = ComplexMatrix::Identity(2, 2) / 2.0;
    nonherm(0, 1) = 0.1;
    EXPECT_THROW(DensityMatrix::from_matrix(nonherm), std::invalid_argument);
}

TEST(DensityMatrix, BasisStateUsesQubitZeroAsMostSignificantBit) {
    const auto rho = DensityMatrix::basis_state("10");
    EXPECT_EQ(rho.n_qubits(), 2u);
    EXPECT_NEAR(rho(2, 2).real(), 1.0, 1e-15);
    EXPECT_EQ(bits_to_index("10"), 2u);
    EXPECT_EQ(index_to_bits(2, 2), "10");
}

TEST(Tensor, Examples) {
    const auto a = tensor(DensityMatrix::zero_state(1), DensityMatrix::zero_state(1));
    EXPECT_LT(oracle::max_abs(a.matrix() - oracle::basis("00")), 1e-15);
    const auto mixed = tensor(DensityMatrix::maximally_mixed(1), DensityMatrix::maximally_mixed(1));
    EXPECT_LT(oracle::max_abs(mixed.matrix() - ComplexMatrix::Identity(4, 4) / 4.0), 1e-15);
}

TEST(PartialTrace, Examples) {
    const std::size_t keep0[1] = {0};
    const std::size_t keep1[1] = {1};
    EXPECT_LT(oracle::max_abs(partial_trace(DensityMatrix::basis_state("00"), keep0).matrix() - oracle::basis("0")),
              1e-15);
    ComplexMatrix bell = ComplexMatrix::Zero(4, 4);
    bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
    for (auto keep : {keep0, keep1}) {
        const auto r = partial_trace(dm(bell), std::span<const std::size_t>(keep, 1));
        EXPECT_LT(oracle::max_abs(r.matrix() - oracle::I2() / 2.0), 1e-15);
    }
    std::mt19937_64 rng(3);
    const ComplexMatrix rho = oracle::random_density(8, rng);
    const std::size_t all[3] = {0, 1, 2};
    EXPECT_LT(oracle::max_abs(partial_trace(dm(rho), all).matrix() - rho), 1e-14);
}

TEST(PartialTrace, TensorThenTraceRecoversFactor) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix a = oracle::random_density(4, rng);
        const ComplexMatrix b = oracle::random_density(2, rng);
        const auto ab = tensor(dm(a), dm(b));
        EXPECT_LT(oracle::max_abs(ab.matrix() - oracle::kron(a, b)), 1e-14);
        const std::size_t keep[2] = {0, 1};
        EXPECT_LT(oracle::max_abs(partial_trace(ab, keep).matrix() - a), 1e-12);
    }
}

TEST(Fidelity, Examples) {
    const auto z = DensityMatrix::basis_state("0");
    const auto o = DensityMatrix::basis_state("1");
    const auto m = DensityMatrix::maximally_mixed(1);
    EXPECT_NEAR(fidelity(z, z), 1.0, 1e-12);
    EXPECT_NEAR(fidelity(z, o), 0.0, 1e-12);
    EXPECT_NEAR(fidelity(z, m), 0.5, 1e-12);
}

TEST(TraceDistance, Examples) {
    const auto z = DensityMatrix::basis_state("0");
    const auto o = DensityMatrix::basis_state("1");
    const auto m = DensityMatrix::maximally_mixed(1);
    EXPECT_NEAR(trace_distance(z, z), 0.0, 1e-12);
    EXPECT_NEAR(trace_distance(z, o), 1.0, 1e-12);
    EXPECT_NEAR(trace_distance(z, m), 0.5, 1e-12);
}

TEST(Purity, Examples) {
    EXPECT_NEAR(purity(DensityMatrix::basis_state("01")), 1.0, 1e-15);
    EXPECT_NEAR(purity(DensityMatrix::maximally_mixed(1)), 0.5, 1e-15);
    EXPECT_NEAR(purity(DensityMatrix::maximally_mixed(2)), 0.25, 1e-15);
}

TEST(StateProperties, FuchsVanDeGraafAndMetricAxioms) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = trial % 2 ? 2 : 4;
        const auto a = dm(oracle::random_density(d, rng, 1 + trial % 3));
        const auto b = dm(oracle::random_density(d, rng));
        const auto c = dm(oracle::random_density(d, rng));
        EXPECT_LE(1.0 - fidelity(a, b), trace_distance(a, b) + 1e-9);
        EXPECT_EQ(trace_distance(a, b), trace_distance(b, a));
        EXPECT_LE(trace_distance(a, c), trace_distance(a, b) + trace_distance(b, c) + 1e-9);
    }
}

TEST(Linalg, HermitianEigenReconstructsUpTo256) {
    std::mt19937_64 rng(7);
    for (std::size_t d : {2u, 16u, 256u}) {
        const ComplexMatrix m = oracle::random_density(d, rng) * static_cast<double>(d);
        const auto e = hermitian_eigen(m);
        const ComplexMatrix back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
        EXPECT_LT((back - m).norm(), 1e-9);
    }
}

TEST(Linalg, ExpmMatchesTaylorSeriesAndHermitianRoute) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    for (std::size_t d : {2u, 8u, 64u}) {
        ComplexMatrix a(d, d);
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = Complex(g(rng), g(rng)) * 0.3;
        // reference: (I + A/2^k + ...)^(2^k) with a long Taylor core
        ComplexMatrix small = a / 1024.0;
        ComplexMatrix term = ComplexMatrix::Identity(d, d), ref = term;
        for (int k = 1; k < 30; ++k) {
            term = term * small / static_cast<double>(k);
            ref += term;
        }
        for (int s = 0; s < 10; ++s) ref = ref * ref;
        const ComplexMatrix got = expm(a);
        EXPECT_LT((got - ref).norm() / ref.norm(), 1e-10) << "d=" << d;
    }
    const ComplexMatrix h = oracle::random_density(4, rng);
    EXPECT_LT((expm_hermitian(h, Complex(0, -1.3)) - expm(Complex(0, -1.3) * h)).norm(), 1e-10);
}

TEST(Measure, Examples) {
    ComplexMatrix plus = ComplexMatrix::Constant(2, 2, 0.5);
    const std::size_t q0[1] = {0};
    const auto br = measure(dm(plus), q0);
    ASSERT_EQ(br.size(), 2u);
    EXPECT_EQ(br[0].bits, "0");
    EXPECT_NEAR(br[0].probability, 0.5, 1e-15);
    EXPECT_LT(oracle::max_abs(br[0].post_state.matrix() - oracle::basis("0")), 1e-15);
    EXPECT_EQ(br[1].bits, "1");
    EXPECT_LT(oracle::max_abs(br[1].post_state.matrix() - oracle::basis("1")), 1e-15);

    const auto one = measure(DensityMatrix::basis_state("0"), q0);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_NEAR(one[0].probability, 1.0, 1e-15);

    ComplexMatrix bell = ComplexMatrix::Zero(4, 4);
    bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
    const auto bb = measure(dm(bell), q0);
    ASSERT_EQ(bb.size(), 2u);
    EXPECT_LT(oracle::max_abs(bb[0].post_state.matrix() - oracle::basis("00")), 1e-15);
    EXPECT_LT(oracle::max_abs(bb[1].post_state.matrix() - oracle::basis("11")), 1e-15);
}

TEST(Measure, BranchProbabilitiesSumToOne) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const auto rho = dm(oracle::random_density(8, rng));
        const std::size_t qs[2] = {2, 0};
        double total = 0.0;
        for (const auto& b : measure(rho, qs)) total += b.probability;
        EXPECT_NEAR(total, 1.0, 1e-10);
    }
}

TEST(Kernels, LocalConjugationMatchesKroneckerProduct) {
    std::mt19937_64 rng(17);
    for (std::size_t q = 0; q < 4; ++q) {
        const ComplexMatrix u = oracle::random_unitary(2, rng);
        const ComplexMatrix rho = oracle::random_density(16, rng);
        ComplexMatrix got = rho;
        const std::size_t qs[1] = {q};
        conjugate(got, u, qs, 4);
        const ComplexMatrix full = oracle::on(u, q, 4);
        EXPECT_LT(oracle::max_abs(got - full * rho * full.adjoint()), 1e-13);
    }
    // two-qubit operator on a non-adjacent, reversed pair
    const ComplexMatrix u2 = oracle::random_unitary(4, rng);
    const ComplexMatrix rho = oracle::random_density(8, rng);
    ComplexMatrix got = rho;
    const std::size_t qs[2] = {2, 0};
    conjugate(got, u2, qs, 3);
    // reference: local index (bit of qubit 2, bit of qubit 0); qubit 1 is a spectator
    auto bit = [](int i, int q) { return (i >> (2 - q)) & 1; };
    ComplexMatrix full = ComplexMatrix::Zero(8, 8);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
            if (bit(r, 1) == bit(c, 1)) full(r, c) = u2(2 * bit(r, 2) + bit(r, 0), 2 * bit(c, 2) + bit(c, 0));
    EXPECT_LT(oracle::max_abs(got - full * rho * full.adjoint()), 1e-13);
}
