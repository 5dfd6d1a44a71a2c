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
#include <numbers>

#include "oracles.hpp"
#include "qpufsim/executor.hpp"
#include "qpufsim/lindblad.hpp"
#include "qpufsim/qpuf.hpp"
#include "qpufsim/tomography.hpp"

using namespace qpufsim;

namespace {

std::vector<std::pair<std::size_t, std::size_t>> cx_pairs(const Circuit& c) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& op : c.ops()) {
        if (const auto* g = std::get_if<Gate>(&op); g && g->kind == GateKind::CX) {
            out.emplace_back(g->qubits[0], g->qubits[1]);
        }
    }
    return out;
}

bool all_rates_in_bounds(const std::vector<double>& v) {
    for (double x : v)
        if (x < kRateMin || x > kRateMax) return false;
    return true;
}

QpufInstance zero_rate_l(QpufInstance inst) {
    for (auto& b : inst.l.blocks) {
        std::fill(b.gamma_ad.begin(), b.gamma_ad.end(), 0.0);
        std::fill(b.gamma_phi.begin(), b.gamma_phi.end(), 0.0);
        b.gamma_collective = 0.0;
        b.gamma_pairwise = 0.0;
    }
    return inst;
}

double p_one(const DensityMatrix& rho, std::size_t q) {
    const std::size_t keep[1] = {q};
    return partial_trace(rho, keep)(1, 1).real();
}

}  // namespace

TEST(Arch, NamesRoundTrip) {
    for (Arch a : {Arch::D, Arch::MF, Arch::L}) EXPECT_EQ(parse_arch(arch_name(a)), a);
    EXPECT_EQ(parse_arch("mf"), Arch::MF);
    EXPECT_THROW(parse_arch("Q"), std::invalid_argument);
}

TEST(Challenge, Validation) {
    EXPECT_NO_THROW(validate_challenge("0101", 4));
    EXPECT_THROW(validate_challenge("", 0), std::invalid_argument);
    EXPECT_THROW(validate_challenge("010", 4), std::invalid_argument);
    EXPECT_THROW(validate_challenge("01a1", 4), std::invalid_argument);
}

TEST(NoiseCoefficients, Examples) {
    const auto a = dqpuf_noise_coeffs("1010");
    EXPECT_NEAR(a.gamma_amp, 0.02, 1e-15);
    EXPECT_NEAR(a.gamma_phase, 0.026, 1e-15);
    EXPECT_NEAR(a.p_depol, 0.018, 1e-15);
    const auto b = dqpuf_noise_coeffs("0000");
    EXPECT_NEAR(b.gamma_amp, 0.01, 1e-15);
    EXPECT_NEAR(b.gamma_phase, 0.032, 1e-15);
    EXPECT_NEAR(b.p_depol, 0.018, 1e-15);
    // length 7 wraps to 2
    EXPECT_NEAR(dqpuf_noise_coeffs("0000000").p_depol, 0.014, 1e-15);
    EXPECT_THROW(dqpuf_noise_coeffs(""), std::invalid_argument);
}

TEST(Qgen, Deterministic) {
    for (Arch a : {Arch::D, Arch::MF, Arch::L}) {
        const auto x = qgen(a, 4, 17, 3);
        const auto y = qgen(a, 4, 17, 3);
        EXPECT_EQ(params_digest(x), params_digest(y));
        EXPECT_EQ(instance_to_json(x), instance_to_json(y));
    }
}

TEST(Qgen, DistinctIndicesGiveDistinctParams) {
    const auto a = qgen(Arch::D, 4, 17, 0);
    const auto b = qgen(Arch::D, 4, 17, 1);
    EXPECT_NE(a.d.layer1[0].theta, b.d.layer1[0].theta);
    EXPECT_NE(a.device_id, b.device_id);
    const auto la = qgen(Arch::L, 4, 17, 0);
    const auto lb = qgen(Arch::L, 4, 17, 1);
    EXPECT_NE(la.l.blocks[0].ry, lb.l.blocks[0].ry);
}

TEST(Qgen, RatesWithinBounds) {
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const auto d = qgen(Arch::D, 3, 99, i);
        EXPECT_TRUE(all_rates_in_bounds(d.d.amp_rate));
        EXPECT_TRUE(all_rates_in_bounds(d.d.phase_rate));
        EXPECT_TRUE(all_rates_in_bounds(d.d.depol_rate));
        const auto l = qgen(Arch::L, 3, 99, i);
        for (const auto& b : l.l.blocks) {
            EXPECT_TRUE(all_rates_in_bounds(b.gamma_ad));
            EXPECT_TRUE(all_rates_in_bounds(b.gamma_phi));
            EXPECT_TRUE(all_rates_in_bounds({b.gamma_collective, b.gamma_pairwise}));
        }
    }
}

TEST(Qgen, DefaultsAndErrors) {
    const auto l = qgen(Arch::L, 3, 1, 0);
    EXPECT_EQ(l.l.blocks.size(), 2u);
    EXPECT_DOUBLE_EQ(l.l.blocks[0].tau, 1.0);
    EXPECT_EQ(qgen(Arch::MF, 3, 1, 0).mf.rounds.size(), 1u);
    const auto d = qgen(Arch::D, 5, 1, 0);
    for (std::size_t i = 0; i < d.d.layer5.size(); ++i) EXPECT_LE(std::abs(d.d.layer5[i].theta), 0.1);
    for (double t : d.d.layer3_theta) {
        EXPECT_GE(t, 0.0);
        EXPECT_LT(t, 2 * std::numbers::pi);
    }
    EXPECT_THROW(qgen(Arch::D, 1, 1, 0), std::invalid_argument);
    GenOptions bad;
    bad.m = 0;
    EXPECT_THROW(qgen(Arch::L, 3, 1, 0, bad), std::invalid_argument);
}

TEST(Dqpuf, LayerFourFollowsChallengeParity) {
    const auto inst = qgen(Arch::D, 4, 2, 0);
    using P = std::pair<std::size_t, std::size_t>;
    const std::vector<P> layer2 = {{0, 1}, {2, 3}};
    auto chain = layer2;
    chain.insert(chain.end(), {{0, 1}, {1, 2}, {2, 3}});
    auto star = layer2;
    star.insert(star.end(), {{0, 1}, {0, 2}, {0, 3}});
    EXPECT_EQ(cx_pairs(dqpuf_build(inst, "1100")), chain);
    EXPECT_EQ(cx_pairs(dqpuf_build(inst, "0000")), chain);
    EXPECT_EQ(cx_pairs(dqpuf_build(inst, "1000")), star);
    EXPECT_EQ(cx_pairs(dqpuf_build(inst, "1110")), star);
}

TEST(Dqpuf, StructureAndArchCheck) {
    const auto inst = qgen(Arch::D, 3, 2, 0);
    const Circuit c = dqpuf_build(inst, "101");
    std::size_t x_gates = 0, channels = 0, measures = 0;
    for (const auto& op : c.ops()) {
        if (const auto* g = std::get_if<Gate>(&op); g && g->kind == GateKind::X) ++x_gates;
        if (std::holds_alternative<ChannelOp>(op)) ++channels;
        if (std::holds_alternative<MeasureOp>(op)) ++measures;
    }
    EXPECT_EQ(x_gates, 2u);
    EXPECT_EQ(channels, 5u * 3u);  // one stack per qubit after each of five layers
    EXPECT_EQ(measures, 1u);
    EXPECT_THROW(dqpuf_build(qgen(Arch::L, 3, 2, 0), "101"), std::invalid_argument);
    EXPECT_THROW(dqpuf_build(inst, "10"), std::invalid_argument);
}

TEST(Dqpuf, ZeroNoiseIsUnitary) {
    auto inst = qgen(Arch::D, 4, 8, 0);
    inst.d.noise_scale = 0.0;
    const auto out = evaluate_exact(inst, "0110");
    EXPECT_NEAR(purity(out.state), 1.0, 1e-9);
}

TEST(Mfqpuf, NoFeedbackRoundsReducesToD) {
    GenOptions opt;
    opt.f = 0;
    const auto mf = qgen(Arch::MF, 4, 6, 2, opt);
    auto d = mf;
    d.arch = Arch::D;
    EXPECT_EQ(to_text(mfqpuf_build(mf, "1011")), to_text(dqpuf_build(d, "1011")));
    EXPECT_LT(oracle::max_abs(evaluate_exact(mf, "1011").state.matrix() - evaluate_exact(d, "1011").state.matrix()),
              1e-14);
}

TEST(Mfqpuf, FirstRoundMeasuresQubitTwoOnFour) {
    EXPECT_EQ(feedback_qubit(0, 4), 2u);
    EXPECT_EQ(feedback_qubit(1, 4), 3u);
    EXPECT_EQ(feedback_qubit(2, 4), 0u);
    const Circuit c = mfqpuf_build(qgen(Arch::MF, 4, 1, 0), "0000");
    const MeasureOp* first = nullptr;
    for (const auto& op : c.ops()) {
        if ((first = std::get_if<MeasureOp>(&op))) break;
    }
    ASSERT_NE(first, nullptr);
    EXPECT_EQ(first->qubits, std::vector<std::size_t>{2});
    EXPECT_EQ(first->slots, std::vector<std::size_t>{4});
}

TEST(Mfqpuf, IdentityFeedbackDephasesMeasuredQubit) {
    auto inst = qgen(Arch::MF, 2, 3, 0);
    ASSERT_EQ(inst.mf.rounds[0].measured, 1u);
    inst.mf.identity_feedback = true;
    inst.d.noise_scale = 0.0;
    inst.d.layer1 = {Gate::ry(1, std::numbers::pi / 2)};  // |+> on the measured qubit
    inst.d.layer3_theta.assign(2, 0.0);
    inst.d.layer5.clear();
    const auto out = evaluate_exact(inst, "00");
    const ComplexMatrix want = oracle::kron(oracle::ket_bra(0, 0), 0.5 * oracle::I2());
    EXPECT_LT(oracle::max_abs(out.state.matrix() - want), 1e-14);
}

TEST(Mfqpuf, LedgerHasTwoToTheFBranches) {
    for (std::size_t f : {1u, 2u, 3u}) {
        GenOptions opt;
        opt.f = f;
        const auto inst = qgen(Arch::MF, 4, 12, 0, opt);
        const auto run = run_exact(mfqpuf_build(inst, "0110"), DensityMatrix::zero_state(4));
        EXPECT_EQ(run.ledger.size(), std::size_t{1} << f);
        double total = 0.0;
        for (const auto& e : run.ledger) total += e.probability;
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(Lqpuf, ZeroRatesArePure) {
    const auto inst = zero_rate_l(qgen(Arch::L, 4, 4, 0));
    EXPECT_NEAR(purity(lqpuf_eval(inst, "1001")), 1.0, 1e-9);
}

TEST(Lqpuf, AmplitudeDampingWindowDecaysExponentially) {
    QpufInstance inst;
    inst.arch = Arch::L;
    inst.n_qubits = 2;
    inst.seed = 1;
    LindbladBlock b;
    b.cx = {0, 1};
    b.ry = b.rz = b.h = {0.0, 0.0};
    const double g = 0.3, tau = 1.7;
    b.gamma_ad = {g, 0.0};
    b.gamma_phi = {0.0, 0.0};
    b.tau = tau;
    inst.l.blocks = {b};
    auto unitary = inst;
    unitary.l.blocks[0].gamma_ad = {0.0, 0.0};
    const double p = p_one(lqpuf_eval(inst, "10"), 0);
    const double p0 = p_one(lqpuf_eval(unitary, "10"), 0);
    ASSERT_GT(p0, 0.1);
    EXPECT_NEAR(p / p0, std::exp(-g * tau), 1e-9);
}

TEST(Lqpuf, MatchesDenseOracle) {
    GenOptions opt;
    opt.trotter_r = 400;
    const auto inst = qgen(Arch::L, 2, 21, 0, opt);
    const std::string challenge = "01";
    // Same gate sequence as the instance, with each window replaced by one dense exponential.
    Circuit prep(2, 0);
    prep.add(Gate::x(1)).add(Gate::h(0)).add(Gate::h(1)).add(Gate::cx(0, 1));
    DensityMatrix rho = run_exact(prep, DensityMatrix::zero_state(2)).state;
    for (const auto& b : inst.l.blocks) {
        Circuit u(2, 0);
        u.add(Gate::cx(b.cx.first, b.cx.second));
        for (std::size_t q = 0; q < 2; ++q) u.add(Gate::ry(q, b.ry[q])).add(Gate::rz(q, b.rz[q]));
        rho = run_exact(u, rho).state;
        std::vector<JumpOperator> js;
        ComplexMatrix h = ComplexMatrix::Zero(4, 4);
        for (std::size_t q = 0; q < 2; ++q) {
            js.push_back(jump_amplitude_damping(q, 2, b.gamma_ad[q]));
            js.push_back(jump_dephasing(q, 2, b.gamma_phi[q]));
            h += b.h[q] * oracle::on(oracle::X(), q, 2);
        }
        js.push_back(jump_collective(b.collective, default_collective_coeffs(2), 2, b.gamma_collective));
        js.push_back(jump_pairwise(b.pairwise, default_pairwise_coeffs(2), 2, b.gamma_pairwise));
        rho = evolve_dense(LindbladGenerator(2, h, js), rho, b.tau);
    }
    Circuit fin(2, 0);
    for (const auto& g : inst.l.final_layer) fin.add(g);
    rho = run_exact(fin, rho).state;
    EXPECT_LT(oracle::max_abs(lqpuf_eval(inst, challenge).matrix() - rho.matrix()), 1e-6);
}

TEST(Lqpuf, RejectsOtherArchitectures) {
    EXPECT_THROW(mfqpuf_build(qgen(Arch::D, 3, 1, 0), "000"), std::invalid_argument);
}

TEST(NonUnitarity, EveryArchitectureMixesAPureChallenge) {
    for (Arch a : {Arch::D, Arch::MF, Arch::L}) {
        const auto inst = qgen(a, 4, 31, 0);
        EXPECT_LE(purity(evaluate_exact(inst, "0110").state), 1.0 - 1e-4) << arch_name(a);
    }
}

TEST(Cptp, InstanceChannelsReconstructAsCptp) {
    for (Arch a : {Arch::D, Arch::MF, Arch::L}) {
        const auto inst = qgen(a, 2, 41, 0);
        const ChannelBox box = [&](const DensityMatrix& in) { return apply_instance_channel(inst, "10", in); };
        const ChoiMatrix j = process_tomography(box, 2, {0, 0, true});
        EXPECT_LT(choi_cptp_defect(j), 1e-6) << arch_name(a);
        EXPECT_LT(oracle::max_abs(choi_input_marginal(j) - ComplexMatrix::Identity(4, 4)), 1e-6);
    }
}

TEST(InstanceChannel, MatchesEncodedEvaluation) {
    for (Arch a : {Arch::D, Arch::MF, Arch::L}) {
        const auto inst = qgen(a, 3, 5, 1);
        const auto direct = evaluate_exact(inst, "110").state;
        const auto via = apply_instance_channel(inst, "110", DensityMatrix::basis_state("110"));
        EXPECT_LT(oracle::max_abs(direct.matrix() - via.matrix()), 1e-12) << arch_name(a);
    }
}

TEST(ExtractRotationEncoding, Examples) {
    const auto zero = extract_rotation_encoding(DensityMatrix::basis_state("0"));
    EXPECT_NEAR(zero[0].first, 0.0, 1e-12);
    ComplexMatrix plus = 0.5 * ComplexMatrix::Ones(2, 2);
    const auto p = extract_rotation_encoding(DensityMatrix::from_matrix(plus));
    EXPECT_NEAR(p[0].first, std::numbers::pi / 2, 1e-12);
    EXPECT_NEAR(p[0].second, 0.0, 1e-12);
    const auto m = extract_rotation_encoding(DensityMatrix::maximally_mixed(1));
    EXPECT_EQ(m[0].first, 0.0);
    // per-qubit reduction on a product state |1> (x) |+i>
    ComplexMatrix pi = oracle::mat2(0.5, Complex(0, -0.5), Complex(0, 0.5), 0.5);
    const auto two = extract_rotation_encoding(DensityMatrix::from_matrix(oracle::kron(oracle::ket_bra(1, 1), pi)));
    EXPECT_NEAR(two[0].first, std::numbers::pi, 1e-12);
    EXPECT_NEAR(two[1].first, std::numbers::pi / 2, 1e-12);
    EXPECT_NEAR(two[1].second, std::numbers::pi / 2, 1e-12);
}

TEST(Response, MajorityTieResolvesToZero) {
    EXPECT_EQ(majority_vote({{"01", 5}, {"10", 5}}, 2), "00");
    EXPECT_EQ(majority_vote({{"01", 5}, {"11", 6}}, 2), "11");
    EXPECT_EQ(majority_vote({{"1", 3}, {"0", 1}}, 1), "1");
}

TEST(Response, DeterministicPointDistribution) {
    for (std::uint64_t shots : {1ull, 7ull, 1000ull}) {
        const auto r = sample_response({{"000", 1.0}}, 3, shots, 4);
        EXPECT_EQ(r.bits, "000");
        EXPECT_EQ(r.histogram.at("000"), shots);
    }
    EXPECT_THROW(sample_response({{"0", 1.0}}, 1, 0, 1), std::invalid_argument);
}

TEST(Qeval, DeterministicAndConsistent) {
    for (Arch a : {Arch::D, Arch::MF, Arch::L}) {
        const auto inst = qgen(a, 3, 8, 2);
        const auto r1 = qeval(inst, "011", 500, 9);
        const auto r2 = qeval(inst, "011", 500, 9);
        EXPECT_EQ(r1.bits, r2.bits);
        EXPECT_EQ(r1.histogram, r2.histogram);
        std::uint64_t total = 0;
        for (const auto& [k, v] : r1.histogram) total += v;
        EXPECT_EQ(total, 500u);
        EXPECT_EQ(r1.bits, majority_vote(r1.histogram, 3));
        EXPECT_THROW(qeval(inst, "01", 10, 1), std::invalid_argument);
    }
}

TEST(Qeval, ProfileRoutesAndAddsNoise) {
    const auto inst = qgen(Arch::D, 4, 3, 0);
    const auto prof = builtin_profile("melbourne");
    const auto ideal = evaluate_exact(inst, "1010");
    const auto noisy = evaluate_exact(inst, "1010", &prof);
    EXPECT_LT(purity(noisy.state), purity(ideal.state));
    double total = 0.0;
    for (const auto& [k, v] : noisy.distribution) total += v;
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(InstanceJson, RoundTripAndTamperCheck) {
    GenOptions opt;
    opt.m = 3;
    opt.trotter_r = 12;
    const auto inst = qgen(Arch::L, 3, 77, 4, opt);
    const std::string text = instance_to_json(inst);
    const auto back = instance_from_json(text);
    EXPECT_EQ(params_digest(back), params_digest(inst));
    EXPECT_EQ(instance_to_json(back), text);
    std::string tampered = text;
    const auto pos = tampered.find("params_digest");
    ASSERT_NE(pos, std::string::npos);
    const auto quote = tampered.find('"', pos + 16);
    tampered[quote + 1] = tampered[quote + 1] == '0' ? '1' : '0';
    EXPECT_THROW(instance_from_json(tampered), std::invalid_argument);
}

TEST(Jitter, ScalesRatesWithinFraction) {
    const auto inst = qgen(Arch::D, 4, 2, 0);
    const auto j = jitter_rates(inst, 0.1, 5);
    for (std::size_t q = 0; q < 4; ++q) {
        EXPECT_LE(std::abs(j.d.amp_rate[q] / inst.d.amp_rate[q] - 1.0), 0.1 + 1e-12);
    }
    EXPECT_NE(params_digest(j), params_digest(inst));
    EXPECT_EQ(params_digest(jitter_rates(inst, 0.0, 5)), params_digest(inst));
    EXPECT_THROW(jitter_rates(inst, 1.0, 5), std::invalid_argument);
}
