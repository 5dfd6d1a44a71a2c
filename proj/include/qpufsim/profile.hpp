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
#include <string>
#include <vector>

#include "qpufsim/channel.hpp"
#include "qpufsim/circuit.hpp"
#include "qpufsim/executor.hpp"

namespace qpufsim {

struct QubitCalibration {
    double t1_us = 0.0;
    double t2_us = 0.0;
    double readout_error = 0.0;  // fraction
};

struct GateDurations {
    double t1q_us = 0.05;
    double t2q_us = 0.3;
    double tro_us = 1.0;
};

struct BackendProfile {
    std::string name;
    Topology topology = Topology::full(1);
    std::vector<QubitCalibration> qubits;
    GateDurations durations;

    std::size_t n_qubits() const { return qubits.size(); }
    /// Throws std::invalid_argument when a calibration entry is unphysical.
    void validate() const;
    /// First k qubits with the induced coupling graph.
    BackendProfile restricted(std::size_t k) const;
};

/// 1/T_phi = 1/T2 - 1/(2 T1); +infinity when that difference is not positive.
double pure_dephasing_time(double t1, double t2);

KrausChannel gate_noise(const BackendProfile& profile, std::size_t qubit, double duration_us);
ReadoutMatrix readout_noise(const BackendProfile& profile);

/// Gate, pre-measurement and readout noise for the first n qubits.
NoisePolicy noise_policy(const BackendProfile& profile, std::size_t n_qubits);

/// Summary statistics a synthetic device is drawn from.
struct CalibrationStats {
    double mean, min, max, sd;
};
struct DeviceStats {
    CalibrationStats t1, t2, t_phi, readout_pct;
};
DeviceStats device_stats(const std::string& name);

std::vector<BackendProfile> builtin_profiles();
BackendProfile builtin_profile(const std::string& name);

std::string profile_to_json(const BackendProfile& profile);
BackendProfile profile_from_json(const std::string& text);

}  // namespace qpufsim
