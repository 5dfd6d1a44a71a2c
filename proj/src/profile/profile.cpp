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

#include "qpufsim/profile.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "qpufsim/random.hpp"

namespace qpufsim {

namespace {

constexpr std::uint64_t kProfileSeed = 0x51A7E5CA1B0ULL;

double truncated_normal(Rng& rng, const CalibrationStats& s) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
        const double x = s.mean + s.sd * rng.normal();
        if (x >= s.min && x <= s.max) {
            return x;
        }
    }
    throw std::runtime_error("truncated normal sampler did not converge");
}

BackendProfile synthesize(const std::string& name, Topology topology) {
    const DeviceStats st = device_stats(name);
    BackendProfile p;
    p.name = name;
    p.topology = topology;
    Rng rng(hash64(kProfileSeed, "profile", name));
    for (std::size_t q = 0; q < topology.n_physical(); ++q) {
        QubitCalibration c;
        c.t1_us = truncated_normal(rng, st.t1);
        do {
            c.t2_us = truncated_normal(rng, st.t2);
        } while (c.t2_us >= 2.0 * c.t1_us);
        c.readout_error = truncated_normal(rng, st.readout_pct) / 100.0;
        p.qubits.push_back(c);
    }
    p.validate();
    return p;
}

}  // namespace

void BackendProfile::validate() const {
    if (qubits.size() != topology.n_physical()) {
        throw std::invalid_argument("profile " + name + ": calibration count does not match topology");
    }
    for (std::size_t q = 0; q < qubits.size(); ++q) {
        const auto& c = qubits[q];
        const std::string where = "profile " + name + " qubit " + std::to_string(q);
        if (!(c.t1_us > 0.0) || !(c.t2_us > 0.0)) {
            throw std::invalid_argument(where + ": T1 and T2 must be positive");
        }
        if (c.t2_us > 2.0 * c.t1_us + 1e-9) {
            throw std::invalid_argument(where + ": T2 exceeds 2*T1");
        }
        if (!(c.readout_error >= 0.0 && c.readout_error <= 0.5)) {
            throw std::invalid_argument(where + ": readout error outside [0, 0.5]");
        }
    }
    if (durations.t1q_us < 0.0 || durations.t2q_us < 0.0 || durations.tro_us < 0.0) {
        throw std::invalid_argument("profile " + name + ": negative gate duration");
    }
}

BackendProfile BackendProfile::restricted(std::size_t k) const {
    if (k == 0 || k > qubits.size()) {
        throw GuardError("profile " + name + " has " + std::to_string(qubits.size()) + " qubits, " +
                         std::to_string(k) + " requested");
    }
    BackendProfile p = *this;
    p.topology = topology.induced(k);
    p.qubits.resize(k);
    return p;
}

double pure_dephasing_time(double t1, double t2) {
    if (!(t1 > 0.0) || !(t2 > 0.0)) {
        throw std::invalid_argument("T1 and T2 must be positive");
    }
    const double rate = 1.0 / t2 - 1.0 / (2.0 * t1);
    if (rate <= 1e-12) {
        return std::numeric_limits<double>::infinity();
    }
    return 1.0 / rate;
}

KrausChannel gate_noise(const BackendProfile& profile, std::size_t qubit, double duration_us) {
    if (qubit >= profile.n_qubits()) {
        throw std::out_of_range("qubit " + std::to_string(qubit) + " not in profile " + profile.name);
    }
    if (duration_us < 0.0) {
        throw std::invalid_argument("gate duration must be nonnegative");
    }
    const auto& c = profile.qubits[qubit];
    const double gamma = -std::expm1(-duration_us / c.t1_us);
    const double tphi = pure_dephasing_time(c.t1_us, c.t2_us);
    const double q = std::isinf(tphi) ? 0.0 : -0.5 * std::expm1(-duration_us / tphi);
    return compose(phase_damping(q), amplitude_damping(gamma));
}

ReadoutMatrix readout_noise(const BackendProfile& profile) {
    std::vector<double> flips;
    for (const auto& c : profile.qubits) {
        flips.push_back(c.readout_error);
    }
    return ReadoutMatrix::symmetric_flips(flips);
}

NoisePolicy noise_policy(const BackendProfile& profile, std::size_t n_qubits) {
    if (n_qubits > profile.n_qubits()) {
        throw GuardError("profile " + profile.name + " has only " + std::to_string(profile.n_qubits()) + " qubits");
    }
    NoisePolicy p;
    for (std::size_t q = 0; q < n_qubits; ++q) {
        p.after_single.emplace_back(gate_noise(profile, q, profile.durations.t1q_us));
        p.after_two.emplace_back(gate_noise(profile, q, profile.durations.t2q_us));
        p.before_measure.emplace_back(gate_noise(profile, q, profile.durations.tro_us));
        p.readout_flip.push_back(profile.qubits[q].readout_error);
    }
    return p;
}

DeviceStats device_stats(const std::string& name) {
    if (name == "athens") {
        return {{75.78, 57.47, 103.87, 8.03}, {90.46, 50.98, 125.23, 12.68}, {224.39, 91.61, 315.3, 60.25},
                {2.45, 1.27, 24.06, 2.93}};
    }
    if (name == "santiago") {
        return {{133.14, 83.59, 163.19, 13.63}, {123.33, 55.7, 165.09, 17.01}, {229.73, 83.53, 334.07, 45.24},
                {1.95, 0.98, 5.59, 0.77}};
    }
    if (name == "melbourne") {
        return {{55.02, 47.78, 60.45, 2.04}, {59.87, 44.39, 70.79, 4.73}, {131.32, 85.7, 211.7, 55.0},
                {7.02, 4.1, 10.16, 1.09}};
    }
    throw std::invalid_argument("unknown profile '" + name + "'");
}

std::vector<BackendProfile> builtin_profiles() {
    return {synthesize("athens", Topology::path(5)), synthesize("santiago", Topology::star(5)),
            synthesize("melbourne", Topology::melbourne())};
}

BackendProfile builtin_profile(const std::string& name) {
    if (name == "athens") return synthesize(name, Topology::path(5));
    if (name == "santiago") return synthesize(name, Topology::star(5));
    if (name == "melbourne") return synthesize(name, Topology::melbourne());
    throw std::invalid_argument("unknown profile '" + name + "'");
}

std::string profile_to_json(const BackendProfile& profile) {
    nlohmann::ordered_json j;
    j["name"] = profile.name;
    j["n_qubits"] = profile.n_qubits();
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& [a, b] : profile.topology.edges()) {
        j["edges"].push_back({a, b});
    }
    j["qubits"] = nlohmann::ordered_json::array();
    for (const auto& c : profile.qubits) {
        j["qubits"].push_back({{"t1_us", c.t1_us}, {"t2_us", c.t2_us}, {"readout_error", c.readout_error}});
    }
    j["durations"] = {{"t1q_us", profile.durations.t1q_us},
                      {"t2q_us", profile.durations.t2q_us},
                      {"tro_us", profile.durations.tro_us}};
    return j.dump(2);
}

BackendProfile profile_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        BackendProfile p;
        p.name = j.at("name").get<std::string>();
        const auto n = j.at("n_qubits").get<std::size_t>();
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (const auto& e : j.at("edges")) {
            edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
        }
        p.topology = Topology::from_edges(n, edges);
        for (const auto& q : j.at("qubits")) {
            p.qubits.push_back({q.at("t1_us").get<double>(), q.at("t2_us").get<double>(),
                                q.at("readout_error").get<double>()});
        }
        if (j.contains("durations")) {
            const auto& d = j["durations"];
            p.durations = {d.at("t1q_us").get<double>(), d.at("t2q_us").get<double>(), d.at("tro_us").get<double>()};
        }
        p.validate();
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad profile JSON: ") + e.what());
    }
}

}  // namespace qpufsim
