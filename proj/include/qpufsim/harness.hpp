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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qpufsim/metrics.hpp"
#include "qpufsim/qpuf.hpp"

namespace qpufsim {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr std::size_t kDensityMatrixMaxQubits = 8;

struct ExperimentConfig {
    int schema_version = kConfigSchemaVersion;
    std::vector<Arch> archs = {Arch::D};
    std::vector<std::size_t> n_qubits = {2, 4, 6, 8};
    std::size_t n_instances = 50;
    std::size_t n_challenges = 100;
    std::uint64_t shots = 10000;
    std::size_t repeats = 5;
    std::uint64_t master_seed = 1;
    /// "ideal", a built-in profile name, or a path to a profile JSON file.
    std::string profile = "ideal";
    GenOptions gen;
    /// Per-round multiplicative rate drift; 0 disables it.
    double rate_jitter = 0.0;
    bool quantum_metrics = true;
    std::string output_dir;

    /// Throws std::invalid_argument for bad counts, GuardError for oversized registers.
    void validate() const;
};

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);
std::string config_digest(const ExperimentConfig& config);

struct CrpRecord {
    std::string arch;
    std::size_t n_qubits = 0;
    std::size_t instance = 0;
    std::string device_id;
    std::size_t challenge_index = 0;
    std::string challenge;
    std::size_t round = 0;  // 0 is the golden response
    std::string response;
    std::uint64_t shots = 0;
    std::uint64_t histogram_digest = 0;
    std::uint64_t seed = 0;
};

inline constexpr const char* kCrpCsvHeader =
    "arch,n_qubits,instance,device_id,challenge_index,challenge,round,response,shots,histogram_digest,seed";

std::string crps_to_csv(const std::vector<CrpRecord>& records);
std::vector<CrpRecord> crps_from_csv(const std::string& text);

std::uint64_t histogram_digest(const Histogram& histogram);

/// Without replacement when count <= 2^n, otherwise with replacement.
std::vector<std::string> sample_challenges(std::size_t n_qubits, std::size_t count, std::uint64_t seed);

/// Every n-bit string in ascending order.
std::vector<std::string> all_challenges(std::size_t n_qubits);

/// Shot stream seed for one evaluation round.
std::uint64_t shot_seed(std::uint64_t instance_seed, const std::string& challenge, std::size_t round);

/// Classical metrics for one (arch, n) group of an archive; other report fields untouched.
void classical_metrics_from_crps(const std::vector<CrpRecord>& group, MetricsReport& report);

struct ExperimentResult {
    std::vector<MetricsReport> reports;
    std::vector<CrpRecord> crps;
};

/// `progress`, when given, receives one line per finished (arch, n) group.
ExperimentResult run_experiment(const ExperimentConfig& config, std::ostream* progress = nullptr);

/// metrics.csv, metrics.json, crps.csv and config.json under `dir`.
void write_experiment(const ExperimentResult& result, const ExperimentConfig& config, const std::string& dir);

/// Reloads an archive directory and recomputes classical metrics from its CRPs.
std::vector<MetricsReport> recompute_metrics(const std::string& archive_dir);

/// Per-metric series and profile histograms. Returns the files written.
std::vector<std::string> emit_plot_data(const std::string& archive_dir, const std::string& out_dir);

/// Loads a built-in name or a JSON file; "ideal" yields an empty optional.
std::optional<BackendProfile> resolve_profile(const std::string& spec);

/// Command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qpufsim
