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

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qpufsim/linalg.hpp"
#include "qpufsim/qpuf.hpp"
#include "qpufsim/tomography.hpp"

using namespace qpufsim;

namespace {

// J = sum_ij E(|i><j|) kron |i><j| assembled from hand-written channel actions.
ComplexMatrix choi_from_action(const std::function<ComplexMatrix(int, int)>& action) {
    ComplexMatrix j = ComplexMatrix::Zero(4, 4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) j += oracle::kron(action(a, b), oracle::ket_bra(a, b));
    return j;
}

ComplexMatrix ad_choi(double g) {
    return choi_from_action([g](int a, int b) -> ComplexMatrix {
        if (a == 0 && b == 0) return oracle::ket_bra(0, 0);
        if (a == 1 && b == 1) return g * oracle::ket_bra(0, 0) + (1 - g) * oracle::ket_bra(1, 1);
        return std::sqrt(1 - g) * oracle::ket_bra(a, b);
    });
}

ChannelBox box_of(const KrausChannel& k) {
    return [k](const DensityMatrix& rho) { return apply(k, rho); };
}

double frob(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).norm(); }

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

const TomographyOptions kExact{0, 0, true};

}  // namespace

TEST(ParameterCount, Examples) {
    EXPECT_EQ(parameter_count(ChannelModel::Unitary, 1), 3u);
    EXPECT_EQ(parameter_count(ChannelModel::Cptp, 1), 12u);
    EXPECT_EQ(parameter_count(ChannelModel::Cptp, 2), 240u);
    EXPECT_EQ(parameter_count(ChannelModel::Unitary, 2), 15u);
}

TEST(ParameterCount, RatioGrowsAsDimensionSquared) {
    for (std::size_t n = 1; n <= 5; ++n) {
        const std::uint64_t d = 1ull << n;
        EXPECT_EQ(parameter_count(ChannelModel::Cptp, n), d * d * parameter_count(ChannelModel::Unitary, n));
    }
}

TEST(SampleComplexity, Examples) {
    EXPECT_EQ(sample_complexity(12, 0.1), 1200u);
    EXPECT_EQ(sample_complexity(3, 0.1), 300u);
    EXPECT_EQ(sample_complexity(7, 0.05, 2.0), 4 * sample_complexity(7, 0.1, 2.0));
    EXPECT_THROW(sample_complexity(3, 0.0), std::invalid_argument);
    EXPECT_THROW(sample_complexity(3, -0.1), std::invalid_argument);
}

TEST(StateTomography, ExactStatisticsIsExact) {
    const auto zero = DensityMatrix::basis_state("0");
    EXPECT_LT(oracle::max_abs(state_tomography([&] { return zero; }, kExact).matrix() - zero.matrix()), 1e-10);
    const auto mixed = DensityMatrix::maximally_mixed(1);
    EXPECT_LT(oracle::max_abs(state_tomography([&] { return mixed; }, kExact).matrix() - mixed.matrix()), 1e-10);
    std::mt19937_64 rng(4);
    for (std::size_t n = 1; n <= 3; ++n) {
        const auto rho = DensityMatrix::from_matrix(oracle::random_density(std::size_t{1} << n, rng));
        EXPECT_LT(oracle::max_abs(state_tomography([&] { return rho; }, kExact).matrix() - rho.matrix()), 1e-10);
    }
}

TEST(StateTomography, RefusesLargeRegisters) {
    const auto rho = DensityMatrix::zero_state(4);
    EXPECT_THROW(state_tomography([&] { return rho; }, kExact), GuardError);
}

TEST(StateTomography, ProjectionYieldsValidState) {
    ComplexMatrix est = ComplexMatrix::Zero(2, 2);
    est(0, 0) = 1.2;
    est(1, 1) = -0.2;
    const DensityMatrix p = project_to_density(est);
    EXPECT_TRUE(oracle::is_valid_state(p.matrix()));
    EXPECT_NEAR(p(0, 0).real(), 1.0, 1e-12);
}

TEST(StateTomography, ErrorScalesAsInverseRootShots) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 0.7;
    m(1, 1) = 0.3;
    m(0, 1) = Complex(0.1, 0.05);
    m(1, 0) = std::conj(m(0, 1));
    const auto rho = DensityMatrix::from_matrix(m);
    std::vector<double> xs, ys;
    for (std::uint64_t shots : {1000ull, 4000ull, 16000ull}) {
        std::vector<double> errs;
        for (std::uint64_t s = 0; s < 41; ++s) {
            const auto est = state_tomography([&] { return rho; }, {shots, 1000 + s, false});
            errs.push_back(frob(est.matrix(), m));
        }
        xs.push_back(std::log(static_cast<double>(shots)));
        ys.push_back(std::log(median(errs)));
    }
    const double mx = (xs[0] + xs[1] + xs[2]) / 3, my = (ys[0] + ys[1] + ys[2]) / 3;
    double sxy = 0, sxx = 0;
    for (int i = 0; i < 3; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    EXPECT_NEAR(sxy / sxx, -0.5, 0.15);
}

TEST(ProcessTomography, InputsAreInformationallyComplete) {
    for (std::size_t n = 1; n <= 2; ++n) {
        const auto inputs = tomography_inputs(n);
        const std::size_t d = std::size_t{1} << n;
        ASSERT_EQ(inputs.size(), d * d);
        ComplexMatrix span(d * d, d * d);
        for (std::size_t k = 0; k < inputs.size(); ++k) {
            span.col(static_cast<Eigen::Index>(k)) = inputs[k].matrix().reshaped();
        }
        Eigen::FullPivLU<ComplexMatrix> lu(span);
        EXPECT_EQ(static_cast<std::size_t>(lu.rank()), d * d);
    }
    const auto one = tomography_inputs(1);
    EXPECT_NEAR(one[2](0, 1).real(), 0.5, 1e-12);  // |+>
    EXPECT_NEAR(one[3](1, 0).imag(), 0.5, 1e-12);  // |+i>
}

TEST(ProcessTomography, ExactIdentityAndAmplitudeDamping) {
    const ChoiMatrix id = process_tomography(box_of(KrausChannel::identity(2)), 1, kExact);
    EXPECT_LT(frob(id.J, choi_from_action([](int a, int b) { return oracle::ket_bra(a, b); })), 1e-8);
    const ChoiMatrix ad = process_tomography(box_of(amplitude_damping(0.3)), 1, kExact);
    EXPECT_LT(frob(ad.J, ad_choi(0.3)), 1e-8);
}

TEST(ProcessTomography, ExactInverseForEveryChannelConstructor) {
    std::mt19937_64 rng(12);
    const std::vector<KrausChannel> channels = {
        amplitude_damping(0.17), phase_damping(0.4), depolarizing(0.25),
        compose(amplitude_damping(0.1), depolarizing(0.05)), KrausChannel::unitary(oracle::random_unitary(2, rng))};
    for (const auto& k : channels) {
        const auto res = process_tomography_detailed(box_of(k), 1, kExact);
        EXPECT_LT(frob(res.raw.J, choi(k).J), 1e-8);
        // Projection of an already valid Choi matrix is a no-op.
        EXPECT_LT(frob(res.projected.J, res.raw.J), 1e-10);
    }
}

TEST(ProcessTomography, TwoQubitExact) {
    std::mt19937_64 rng(2);
    const KrausChannel k = compose(KrausChannel::unitary(oracle::random_unitary(4, rng)),
                                   embed(amplitude_damping(0.2), 1, 2));
    EXPECT_LT(frob(process_tomography(box_of(k), 2, kExact).J, choi(k).J), 1e-8);
}

TEST(ProcessTomography, GuardsWidth) {
    EXPECT_THROW(process_tomography(box_of(KrausChannel::identity(8)), 3, kExact), GuardError);
}

TEST(ProcessTomography, FiniteShotsProjectToCptp) {
    const auto res = process_tomography_detailed(box_of(amplitude_damping(0.3)), 1, {500, 9, false});
    EXPECT_LT(choi_cptp_defect(res.projected), 1e-6);
    EXPECT_LE(res.iterations, 200u);
    EXPECT_LT(frob(res.projected.J, ad_choi(0.3)), 0.3);
}

TEST(AffineBlochForm, IdentityAndUnitary) {
    const auto id = affine_bloch_form(choi(KrausChannel::identity(2)));
    EXPECT_LT((id.m - RealMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(id.t.cwiseAbs().maxCoeff(), 1e-12);
    std::mt19937_64 rng(77);
    const auto u = affine_bloch_form(choi(KrausChannel::unitary(oracle::random_unitary(2, rng))));
    EXPECT_LT((u.m * u.m.transpose() - RealMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_NEAR(u.m.determinant(), 1.0, 1e-9);
    EXPECT_LT(u.t.cwiseAbs().maxCoeff(), 1e-9);
}

TEST(AffineBlochForm, AmplitudeDamping) {
    const double g = 0.35;
    const auto a = affine_bloch_form(choi(amplitude_damping(g)));
    RealMatrix want = RealMatrix::Zero(3, 3);
    want(0, 0) = want(1, 1) = std::sqrt(1 - g);
    want(2, 2) = 1 - g;
    EXPECT_LT((a.m - want).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(a.t(0), 0.0, 1e-12);
    EXPECT_NEAR(a.t(1), 0.0, 1e-12);
    EXPECT_NEAR(a.t(2), g, 1e-12);
    EXPECT_THROW(affine_bloch_form(choi(KrausChannel::identity(4))), std::invalid_argument);
}

TEST(BestFitUnitary, RecoversUnitaryChannel) {
    std::mt19937_64 rng(31);
    const ComplexMatrix u = oracle::random_unitary(2, rng);
    const ComplexMatrix fit = best_fit_unitary(choi(KrausChannel::unitary(u)));
    EXPECT_LT(unitary_distinguishability(u, fit), 1e-6);
}

TEST(ProcessTomography, DissipativeInstanceCostsMoreThanItsUnitaryFit) {
    const QpufInstance inst = qgen(Arch::D, 2, 5, 0);
    const std::string challenge = "10";
    // Single-qubit channel: qubit 1 starts in |0> and is traced out.
    const ChannelBox device = [&](const DensityMatrix& in) {
        const DensityMatrix out = apply_instance_channel(inst, challenge, tensor(in, DensityMatrix::zero_state(1)));
        const std::size_t keep[] = {0};
        return partial_trace(out, keep);
    };
    const ChoiMatrix truth = process_tomography(device, 1, kExact);
    EXPECT_GT(choi_cptp_defect(truth), -1e-12);
    const KrausChannel fit = KrausChannel::unitary(best_fit_unitary(truth));
    const ChoiMatrix fit_truth = choi(fit);
    std::vector<double> cptp_err, unitary_err;
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        const TomographyOptions opt{400, 500 + trial, false};
        cptp_err.push_back(frob(process_tomography(device, 1, opt).J, truth.J));
        const ChoiMatrix est = process_tomography(box_of(fit), 1, opt);
        unitary_err.push_back(frob(choi(KrausChannel::unitary(best_fit_unitary(est))).J, fit_truth.J));
    }
    EXPECT_GT(median(cptp_err), median(unitary_err));
}
