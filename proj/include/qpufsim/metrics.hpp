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
#include <cstdint>
#include <string>
#include <vector>

#include "qpufsim/state.hpp"

namespace qpufsim {

/// ||rho - I/d||_1 (unhalved).
double distance_from_uniform(const DensityMatrix& rho);
/// ||a - b||_1 (unhalved).
double trace_norm_distance(const DensityMatrix& a, const DensityMatrix& b);

double uniformity_quantum(const std::vector<DensityMatrix>& outputs);
double uniqueness_quantum(const std::vector<DensityMatrix>& outputs_i, const std::vector<DensityMatrix>& outputs_j);
/// 1 - mean trace distance over every pair of rounds, challenge by challenge.
double reliability_quantum(const std::vector<std::vector<DensityMatrix>>& rounds);

double uniformity_classical(const std::vector<std::string>& responses);
/// Mean pairwise normalized Hamming distance over all device pairs.
double uniqueness_classical(const std::vector<std::vector<std::string>>& device_responses);
double reliability_classical(const std::vector<std::string>& golden, const std::vector<std::vector<std::string>>& rounds);

/// Fraction of differing positions; lengths must agree.
double hamming_fraction(const std::string& a, const std::string& b);

struct MetricsReport {
    std::string arch;
    std::size_t n_qubits = 0;
    std::string profile = "ideal";
    double uniformity_pct = 0.0;
    double uniqueness_pct = 0.0;
    double reliability_pct = 0.0;
    double uniformity_q = 0.0;
    double uniqueness_q = 0.0;
    double reliability_q = 0.0;
    std::size_t instances = 0;
    std::size_t challenges = 0;
    std::uint64_t shots = 0;
    std::size_t repeats = 0;
    std::uint64_t seed = 0;
    std::string config_digest;
};

inline constexpr const char* kMetricsCsvHeader = "arch,n_qubits,metric,value,instances,challenges,shots,repeats,seed";

/// One row per (arch, n, metric).
std::string reports_to_csv(const std::vector<MetricsReport>& reports);
std::string reports_to_json(const std::vector<MetricsReport>& reports);
std::vector<MetricsReport> reports_from_json(const std::string& text);

}  // namespace qpufsim
