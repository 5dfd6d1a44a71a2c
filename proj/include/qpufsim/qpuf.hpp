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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qpufsim/circuit.hpp"
#include "qpufsim/executor.hpp"
#include "qpufsim/lindblad.hpp"
#include "qpufsim/profile.hpp"
#include "qpufsim/state.hpp"

namespace qpufsim {

enum class Arch { D, MF, L };

std::string arch_name(Arch arch);
/// Accepts D, MF, L in any case.
Arch parse_arch(const std::string& name);

/// Throws std::invalid_argument unless `bits` is a 0/1 string of length n.
void validate_challenge(const std::string& bits, std::size_t n_qubits);

inline constexpr double kRateMin = 0.001;
inline constexpr double kRateMax = 0.05;

struct NoiseCoefficients {
    double gamma_amp = 0.0;
    double gamma_phase = 0.0;
    double p_depol = 0.0;
};

/// Challenge-dependent base coefficients of the dissipative design.
NoiseCoefficients dqpuf_noise_coeffs(const std::string& challenge);

struct DParams {
    std::vector<Gate> layer1;
    std::vector<double> layer3_theta;
    std::vector<Gate> layer5;
    /// Per-qubit device rates; each multiplies the matching challenge coefficient.
    std::vector<double> amp_rate, phase_rate, depol_rate;
    /// Multiplies every noise coefficient. 0 turns the circuit unitary.
    double noise_scale = 1.0;
};

struct FeedbackRound {
    std::size_t measured = 0;
    bool one_uses_h = true;  // else RZ(one_theta)
    double one_theta = 0.0;
    GateKind zero_kind = GateKind::S;  // S, RX or RY
    double zero_theta = 0.0;
};

struct MfParams {
    std::vector<FeedbackRound> rounds;
    /// Test hook: conditionals carry no gates.
    bool identity_feedback = false;
};

struct LindbladBlock {
    std::pair<std::size_t, std::size_t> cx;
    std::vector<double> ry, rz;
    std::vector<double> h;  // local X fields
    std::vector<double> gamma_ad, gamma_phi;
    Pauli collective = Pauli::Z;
    double gamma_collective = 0.0;
    Pauli pairwise = Pauli::Z;
    double gamma_pairwise = 0.0;
    double tau = 1.0;
};

struct LParams {
    std::vector<LindbladBlock> blocks;
    std::vector<Gate> final_layer;
    int trotter_order = 2;
    std::size_t trotter_r = 8;
};

struct QpufInstance {
    Arch arch = Arch::D;
    std::size_t n_qubits = 0;
    std::string device_id;
    std::uint64_t seed = 0;
    DParams d;  // used by D and MF
    MfParams mf;
    LParams l;
};

struct GenOptions {
    std::size_t m = 2;  // Lindblad blocks
    std::size_t f = 1;  // feedback rounds
    double tau = 1.0;
    int trotter_order = 2;
    std::size_t trotter_r = 8;
};

/// Instance seed is hash64(master_seed, "inst", device_index).
QpufInstance qgen(Arch arch, std::size_t n_qubits, std::uint64_t master_seed, std::uint64_t device_index,
                  const GenOptions& options = {});

/// Same construction keyed directly by the instance seed.
QpufInstance qgen_from_seed(Arch arch, std::size_t n_qubits, std::uint64_t instance_seed,
                            const GenOptions& options = {});

/// Every device rate multiplied by an independent factor in [1 - fraction, 1 + fraction].
QpufInstance jitter_rates(const QpufInstance& instance, double fraction, std::uint64_t seed);

/// Mid-circuit measurement target of feedback round k (0-based).
std::size_t feedback_qubit(std::size_t round, std::size_t n_qubits);

Circuit dqpuf_build(const QpufInstance& instance, const std::string& challenge, bool terminal_measure = true);
Circuit mfqpuf_build(const QpufInstance& instance, const std::string& challenge, bool terminal_measure = true);

/// Pre-measurement output state of the Lindblad design.
DensityMatrix lqpuf_eval(const QpufInstance& instance, const std::string& challenge);

/// Per-qubit (theta_y, theta_z) from reduced Bloch vectors.
std::vector<std::pair<double, double>> extract_rotation_encoding(const DensityMatrix& rho);

struct ExactOutput {
    /// Pre-measurement state in logical qubit order (mixture over feedback branches).
    DensityMatrix state;
    /// Distribution of the n response bits after measurement noise and readout flips.
    std::map<std::string, double> distribution;
};

/// Exact evaluation; with a profile the circuit is routed onto its coupling graph and
/// gate, measurement and readout noise are added.
ExactOutput evaluate_exact(const QpufInstance& instance, const std::string& challenge,
                           const BackendProfile* profile = nullptr);

/// The instance as a channel on an arbitrary n-qubit input: the challenge still selects
/// noise coefficients and gate patterns, but its X-encoding is replaced by `input`.
DensityMatrix apply_instance_channel(const QpufInstance& instance, const std::string& challenge,
                                     const DensityMatrix& input);

struct Response {
    std::string bits;
    Histogram histogram;
    std::uint64_t shots = 0;
};

/// Per-position majority; ties resolve to 0.
std::string majority_vote(const Histogram& histogram, std::size_t n_bits);

Response sample_response(const std::map<std::string, double>& distribution, std::size_t n_bits,
                         std::uint64_t shots, std::uint64_t seed);

Response qeval(const QpufInstance& instance, const std::string& challenge, std::uint64_t shots, std::uint64_t seed,
               const BackendProfile* profile = nullptr);

/// {arch, n_qubits, device_id, seed, params_digest}.
std::string instance_to_json(const QpufInstance& instance);
std::uint64_t params_digest(const QpufInstance& instance);
/// Regenerates the instance from its seed and options and checks the digest.
QpufInstance instance_from_json(const std::string& text);

/// Generation options recovered from an instance.
GenOptions options_of(const QpufInstance& instance);

}  // namespace qpufsim
