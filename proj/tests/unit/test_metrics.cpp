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
#include "qpufsim/metrics.hpp"
#include "qpufsim/state.hpp"

using namespace qpufsim;

namespace {

DensityMatrix zero1() { return DensityMatrix::basis_state("0"); }
DensityMatrix one1() { return DensityMatrix::basis_state("1"); }
DensityMatrix mixed1() { return DensityMatrix::maximally_mixed(1); }

std::string flip(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = c == '0' ? '1' : '0';
    return out;
}

std::vector<std::string> random_responses(std::size_t count, std::size_t n, std::mt19937_64& rng) {
    std::bernoulli_distribution bit(0.5);
    std::vector<std::string> out(count, std::string(n, '0'));
    for (auto& s : out)
        for (char& c : s) c = bit(rng) ? '1' : '0';
    return out;
}

}  // namespace

TEST(QuantumMetrics, UniformityExamples) {
    EXPECT_NEAR(uniformity_quantum({mixed1(), DensityMatrix::maximally_mixed(1)}), 0.0, 1e-12);
    EXPECT_NEAR(uniformity_quantum({zero1()}), 1.0, 1e-12);
    EXPECT_NEAR(uniformity_quantum({zero1(), mixed1()}), 0.5, 1e-12);
    EXPECT_THROW(uniformity_quantum({}), std::invalid_argument);
}

TEST(QuantumMetrics, UniquenessExamples) {
    EXPECT_NEAR(uniqueness_quantum({zero1(), one1()}, {zero1(), one1()}), 0.0, 1e-12);
    EXPECT_NEAR(uniqueness_quantum({zero1(), one1()}, {one1(), zero1()}), 2.0, 1e-12);
    EXPECT_NEAR(uniqueness_quantum({zero1()}, {mixed1()}), 1.0, 1e-12);
    EXPECT_THROW(uniqueness_quantum({zero1()}, {zero1(), one1()}), std::invalid_argument);
}

TEST(QuantumMetrics, ReliabilityExamples) {
    EXPECT_NEAR(reliability_quantum({{zero1(), one1()}, {zero1(), one1()}}), 1.0, 1e-12);
    EXPECT_NEAR(reliability_quantum({{zero1()}, {one1()}}), 0.0, 1e-12);
    // Diagonal states 0.1 apart in population sit at trace distance 0.1.
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 0) = 0.6;
    a(1, 1) = 0.4;
    ComplexMatrix b = ComplexMatrix::Zero(2, 2);
    b(0, 0) = 0.5;
    b(1, 1) = 0.5;
    EXPECT_NEAR(reliability_quantum({{DensityMatrix::from_matrix(a)}, {DensityMatrix::from_matrix(b)}}), 0.9, 1e-12);
    EXPECT_THROW(reliability_quantum({{zero1()}}), std::invalid_argument);
}

TEST(QuantumMetrics, UniquenessIsSymmetric) {
    std::mt19937_64 rng(3);
    std::vector<DensityMatrix> a, b;
    for (int i = 0; i < 6; ++i) {
        a.push_back(DensityMatrix::from_matrix(oracle::random_density(4, rng)));
        b.push_back(DensityMatrix::from_matrix(oracle::random_density(4, rng, 1)));
    }
    EXPECT_EQ(uniqueness_quantum(a, b), uniqueness_quantum(b, a));
    const double u = uniqueness_quantum(a, b);
    EXPECT_GE(u, 0.0);
    EXPECT_LE(u, 2.0 + 1e-12);
}

TEST(QuantumMetrics, UniformityIsTwiceTraceDistanceToMixed) {
    EXPECT_NEAR(uniformity_quantum({zero1()}), 2.0 * trace_distance(zero1(), mixed1()), 1e-12);
    std::mt19937_64 rng(8);
    for (int i = 0; i < 5; ++i) {
        auto rho = DensityMatrix::from_matrix(oracle::random_density(4, rng));
        EXPECT_NEAR(distance_from_uniform(rho), 2.0 * trace_distance(rho, DensityMatrix::maximally_mixed(2)), 1e-12);
    }
}

TEST(ClassicalMetrics, UniformityExamples) {
    EXPECT_DOUBLE_EQ(uniformity_classical({"00", "00"}), 0.0);
    EXPECT_DOUBLE_EQ(uniformity_classical({"01", "01", "01"}), 50.0);
    EXPECT_THROW(uniformity_classical({}), std::invalid_argument);
    EXPECT_THROW(uniformity_classical({"0a"}), std::invalid_argument);
}

TEST(ClassicalMetrics, UniformityOfComplementsSumsTo100) {
    std::mt19937_64 rng(11);
    auto r = random_responses(37, 5, rng);
    std::vector<std::string> f;
    for (const auto& s : r) f.push_back(flip(s));
    EXPECT_DOUBLE_EQ(uniformity_classical(r) + uniformity_classical(f), 100.0);
}

TEST(ClassicalMetrics, UniquenessExamples) {
    EXPECT_DOUBLE_EQ(uniqueness_classical({{"0110", "11"}, {"0110", "11"}}), 0.0);
    EXPECT_DOUBLE_EQ(uniqueness_classical({{"0110"}, {"1001"}}), 100.0);
    EXPECT_THROW(uniqueness_classical({{"01"}}), std::invalid_argument);
}

TEST(ClassicalMetrics, UniquenessOfIndependentDevicesNearHalf) {
    std::mt19937_64 rng(5);
    std::vector<std::vector<std::string>> devices;
    for (int d = 0; d < 10; ++d) devices.push_back(random_responses(100, 8, rng));
    // 45 pairs x 800 bits; pairs share devices, so the band uses the per-device bit count.
    const double sigma = 100.0 * 0.5 / std::sqrt(800.0);
    EXPECT_NEAR(uniqueness_classical(devices), 50.0, 3.0 * sigma);
}

TEST(ClassicalMetrics, ReliabilityExamples) {
    const std::vector<std::string> golden{"0101010101"};
    EXPECT_DOUBLE_EQ(reliability_classical(golden, {golden, golden}), 100.0);
    EXPECT_DOUBLE_EQ(reliability_classical(golden, {{flip(golden[0])}}), 0.0);
    EXPECT_DOUBLE_EQ(reliability_classical(golden, {{"1101010101"}}), 90.0);
    EXPECT_THROW(reliability_classical(golden, {{"01"}}), std::invalid_argument);
}

TEST(ClassicalMetrics, InvariantUnderChallengeReordering) {
    std::mt19937_64 rng(21);
    std::vector<std::vector<std::string>> devices;
    for (int d = 0; d < 4; ++d) devices.push_back(random_responses(12, 6, rng));
    std::vector<std::size_t> perm(12);
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    auto reorder = [&](const std::vector<std::string>& v) {
        std::vector<std::string> out;
        for (auto i : perm) out.push_back(v[i]);
        return out;
    };
    std::vector<std::vector<std::string>> shuffled;
    for (const auto& d : devices) shuffled.push_back(reorder(d));
    EXPECT_NEAR(uniqueness_classical(devices), uniqueness_classical(shuffled), 1e-12);
    EXPECT_NEAR(uniformity_classical(devices[0]), uniformity_classical(shuffled[0]), 1e-12);
    EXPECT_NEAR(reliability_classical(devices[0], {devices[1], devices[2]}),
                reliability_classical(shuffled[0], {shuffled[1], shuffled[2]}), 1e-12);
}

TEST(MetricsReport, CsvHasOneRowPerMetric) {
    MetricsReport r;
    r.arch = "D";
    r.n_qubits = 4;
    r.uniformity_pct = 49.5;
    r.instances = 2;
    r.challenges = 3;
    r.shots = 100;
    r.repeats = 5;
    r.seed = 9;
    const std::string csv = reports_to_csv({r});
    EXPECT_EQ(csv.substr(0, csv.find('\n')), kMetricsCsvHeader);
    EXPECT_NE(csv.find("D,4,uniformity,49.5"), std::string::npos);
    const auto rows = std::count(csv.begin(), csv.end(), '\n');
    EXPECT_EQ(rows, 7);  // header + six metrics
}

TEST(MetricsReport, JsonRoundTrip) {
    MetricsReport r;
    r.arch = "MF";
    r.n_qubits = 6;
    r.profile = "santiago";
    r.uniformity_pct = 48.25;
    r.uniqueness_pct = 51.125;
    r.reliability_pct = 88.0;
    r.uniformity_q = 0.31;
    r.uniqueness_q = 1.2;
    r.reliability_q = 0.77;
    r.instances = 20;
    r.challenges = 50;
    r.shots = 2000;
    r.repeats = 5;
    r.seed = 123456789;
    r.config_digest = "abc";
    const auto back = reports_from_json(reports_to_json({r}));
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0].arch, r.arch);
    EXPECT_EQ(back[0].profile, r.profile);
    EXPECT_EQ(back[0].uniqueness_pct, r.uniqueness_pct);
    EXPECT_EQ(back[0].reliability_q, r.reliability_q);
    EXPECT_EQ(back[0].seed, r.seed);
    EXPECT_EQ(back[0].config_digest, r.config_digest);
}
