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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qpufsim/channel.hpp"
#include "qpufsim/circuit.hpp"
#include "qpufsim/state.hpp"

namespace qpufsim {

/// Per-qubit noise hooks. Vectors are indexed by qubit; an empty vector or an
/// empty optional means no noise for that slot.
struct NoisePolicy {
    std::vector<std::optional<KrausChannel>> after_single;  // after each 1-qubit gate on the qubit
    std::vector<std::optional<KrausChannel>> after_two;     // on each participant of a 2-qubit gate
    std::vector<std::optional<KrausChannel>> before_measure;
    std::vector<double> readout_flip;  // symmetric classical flip per measured qubit

    bool empty() const;
};

DensityMatrix apply_gate(const DensityMatrix& rho, const Gate& gate);

struct LedgerEntry {
    std::string outcome;  // classical register, slot 0 leftmost
    double probability;
};

struct ExactRun {
    /// Probability-weighted mixture over all branches.
    DensityMatrix state;
    /// Mid-circuit branches by register content, ascending. Measurements whose
    /// qubits and slots are never used again are resolved at the end and do not
    /// split the ledger.
    std::vector<LedgerEntry> ledger;
    /// Joint distribution of the full register after terminal readout.
    std::map<std::string, double> distribution;
};

ExactRun run_exact(const Circuit& circuit, const DensityMatrix& rho0, const NoisePolicy& noise = {});

using Histogram = std::map<std::string, std::uint64_t>;

/// Shot-by-shot simulation with selective collapse. Each shot draws every
/// measurement outcome from the exact conditional probabilities; post-measurement
/// states are memoized per outcome path. Requires the circuit to end in a measurement.
Histogram run_sampled(const Circuit& circuit, const DensityMatrix& rho0, std::uint64_t shots, std::uint64_t seed,
                      const NoisePolicy& noise = {});

/// Multinomial sample of `shots` outcomes from a distribution, deterministic in seed.
Histogram sample_distribution(const std::map<std::string, double>& distribution, std::uint64_t shots,
                              std::uint64_t seed);

/// Marginal over the first `n_slots` register positions.
std::map<std::string, double> marginal_prefix(const std::map<std::string, double>& distribution, std::size_t n_slots);

}  // namespace qpufsim
