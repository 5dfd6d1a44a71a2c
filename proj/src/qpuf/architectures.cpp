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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "qpufsim/qpuf.hpp"
#include "qpufsim/random.hpp"

namespace qpufsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSmallAngle = 0.1;

std::vector<double> draw_rates(Rng& rng, std::size_t n) {
    std::vector<double> r(n);
    for (auto& x : r) x = rng.uniform(kRateMin, kRateMax);
    return r;
}

std::vector<double> draw_angles(Rng& rng, std::size_t n, double lo, double hi) {
    std::vector<double> r(n);
    for (auto& x : r) x = rng.uniform(lo, hi);
    return r;
}

void add_noise_layer(Circuit& c, const QpufInstance& inst, const NoiseCoefficients& k) {
    const auto& d = inst.d;
    for (std::size_t q = 0; q < inst.n_qubits; ++q) {
        const double s = d.noise_scale;
        c.channel(ChannelOp::from_spec(
            NoiseKind::Stack,
            {k.gamma_amp * d.amp_rate[q] * s, k.gamma_phase * d.phase_rate[q] * s, k.p_depol * d.depol_rate[q] * s}, q));
    }
}

void encode_challenge(Circuit& c, const std::string& bits) {
    for (std::size_t q = 0; q < bits.size(); ++q) {
        if (bits[q] == '1') c.add(Gate::x(q));
    }
}

std::size_t count_ones(const std::string& bits) {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), '1'));
}

void layers_1_to_2(Circuit& c, const QpufInstance& inst, const NoiseCoefficients& k) {
    const std::size_t n = inst.n_qubits;
    for (const auto& g : inst.d.layer1) c.add(g);
    add_noise_layer(c, inst, k);
    for (std::size_t q = 0; q + 1 < n; q += 2) c.add(Gate::cx(q, q + 1));
    add_noise_layer(c, inst, k);
}

void layer_3(Circuit& c, const QpufInstance& inst, const NoiseCoefficients& k) {
    for (std::size_t q = 0; q < inst.n_qubits; ++q) {
        switch (q % 4) {
            case 0: c.add(Gate::rz(q, inst.d.layer3_theta[q])); break;
            case 1: c.add(Gate::h(q)); break;
            case 2: c.add(Gate::ry(q, inst.d.layer3_theta[q])); break;
            default: c.add(Gate::s(q)); break;
        }
    }
    add_noise_layer(c, inst, k);
}

void layers_4_to_5(Circuit& c, const QpufInstance& inst, const NoiseCoefficients& k, const std::string& challenge) {
    const std::size_t n = inst.n_qubits;
    if (count_ones(challenge) % 2 == 0) {
        for (std::size_t q = 0; q + 1 < n; ++q) c.add(Gate::cx(q, q + 1));
    } else {
        for (std::size_t q = 1; q < n; ++q) c.add(Gate::cx(0, q));
    }
    add_noise_layer(c, inst, k);
    for (const auto& g : inst.d.layer5) c.add(g);
    add_noise_layer(c, inst, k);
}

void check_arch(const QpufInstance& inst, std::initializer_list<Arch> allowed, const char* what) {
    if (std::find(allowed.begin(), allowed.end(), inst.arch) == allowed.end()) {
        throw std::invalid_argument(std::string(what) + " does not accept a " + arch_name(inst.arch) + " instance");
    }
}

}  // namespace

std::string arch_name(Arch arch) {
    switch (arch) {
        case Arch::D: return "D";
        case Arch::MF: return "MF";
        case Arch::L: return "L";
    }
    return "?";
}

Arch parse_arch(const std::string& name) {
    std::string u = name;
    std::transform(u.begin(), u.end(), u.begin(), [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    if (u == "D" || u == "D-QPUF") return Arch::D;
    if (u == "MF" || u == "MF-QPUF") return Arch::MF;
    if (u == "L" || u == "L-QPUF") return Arch::L;
    throw std::invalid_argument("unknown architecture '" + name + "' (expected D, MF or L)");
}

void validate_challenge(const std::string& bits, std::size_t n_qubits) {
    if (bits.empty()) {
        throw std::invalid_argument("challenge must not be empty");
    }
    if (bits.size() != n_qubits) {
        throw std::invalid_argument("challenge has " + std::to_string(bits.size()) + " bits, instance has " +
                                    std::to_string(n_qubits) + " qubits");
    }
    if (bits.find_first_not_of("01") != std::string::npos) {
        throw std::invalid_argument("challenge must contain only 0 and 1");
    }
}

NoiseCoefficients dqpuf_noise_coeffs(const std::string& challenge) {
    validate_challenge(challenge, challenge.size());
    const double ones = static_cast<double>(count_ones(challenge));
    const double zeros = static_cast<double>(challenge.size()) - ones;
    return {0.01 + 0.005 * ones, 0.02 + 0.003 * zeros, 0.01 + 0.002 * static_cast<double>(challenge.size() % 5)};
}

std::size_t feedback_qubit(std::size_t round, std::size_t n_qubits) { return (n_qubits / 2 + round) % n_qubits; }

QpufInstance qgen_from_seed(Arch arch, std::size_t n, std::uint64_t seed, const GenOptions& opt) {
    if (n < 2) {
        throw std::invalid_argument("QPUF instances need at least 2 qubits");
    }
    dim_for_qubits(n);
    QpufInstance inst;
    inst.arch = arch;
    inst.n_qubits = n;
    inst.seed = seed;
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(seed));
    inst.device_id = arch_name(arch) + "-" + std::to_string(n) + "-" + hex;

    if (arch == Arch::D || arch == Arch::MF) {
        Rng rng(hash64(seed, "d"));
        for (std::size_t q = 0; q < n; ++q) {
            inst.d.layer1.push_back(Gate::rx(q, rng.uniform(0.0, kTwoPi)));
            inst.d.layer1.push_back(Gate::ry(q, rng.uniform(0.0, kTwoPi)));
            inst.d.layer1.push_back(Gate::rz(q, rng.uniform(0.0, kTwoPi)));
        }
        inst.d.layer3_theta = draw_angles(rng, n, 0.0, kTwoPi);
        for (std::size_t q = 0; q < n; ++q) {
            inst.d.layer5.push_back(Gate::rx(q, rng.uniform(-kSmallAngle, kSmallAngle)));
            inst.d.layer5.push_back(Gate::ry(q, rng.uniform(-kSmallAngle, kSmallAngle)));
            inst.d.layer5.push_back(Gate::rz(q, rng.uniform(-kSmallAngle, kSmallAngle)));
        }
        inst.d.amp_rate = draw_rates(rng, n);
        inst.d.phase_rate = draw_rates(rng, n);
        inst.d.depol_rate = draw_rates(rng, n);
    }
    if (arch == Arch::MF) {
        Rng rng(hash64(seed, "mf"));
        static constexpr GateKind zero_kinds[3] = {GateKind::S, GateKind::RX, GateKind::RY};
        for (std::size_t k = 0; k < opt.f; ++k) {
            FeedbackRound r;
            r.measured = feedback_qubit(k, n);
            r.one_uses_h = rng.below(2) == 0;
            r.one_theta = rng.uniform(0.0, kTwoPi);
            r.zero_kind = zero_kinds[rng.below(3)];
            r.zero_theta = rng.uniform(-kSmallAngle, kSmallAngle);
            inst.mf.rounds.push_back(r);
        }
    }
    if (arch == Arch::L) {
        if (opt.m < 1) {
            throw std::invalid_argument("the Lindblad design needs m >= 1");
        }
        if (!(opt.tau >= 0.0)) {
            throw std::invalid_argument("window time must be nonnegative");
        }
        Rng rng(hash64(seed, "l"));
        static constexpr Pauli paulis[3] = {Pauli::X, Pauli::Y, Pauli::Z};
        for (std::size_t k = 0; k < opt.m; ++k) {
            LindbladBlock b;
            const std::size_t i = static_cast<std::size_t>(rng.below(n - 1));
            b.cx = rng.below(2) == 0 ? std::make_pair(i, i + 1) : std::make_pair(i + 1, i);
            b.ry = draw_angles(rng, n, 0.0, kTwoPi);
            b.rz = draw_angles(rng, n, 0.0, kTwoPi);
            b.h = draw_angles(rng, n, -kSmallAngle, kSmallAngle);
            b.gamma_ad = draw_rates(rng, n);
            b.gamma_phi = draw_rates(rng, n);
            b.collective = paulis[rng.below(3)];
            b.gamma_collective = rng.uniform(kRateMin, kRateMax);
            b.pairwise = paulis[rng.below(3)];
            b.gamma_pairwise = rng.uniform(kRateMin, kRateMax);
            b.tau = opt.tau;
            inst.l.blocks.push_back(std::move(b));
        }
        for (std::size_t q = 0; q < n; ++q) {
            inst.l.final_layer.push_back(Gate::rx(q, rng.uniform(0.0, kTwoPi)));
            inst.l.final_layer.push_back(Gate::ry(q, rng.uniform(0.0, kTwoPi)));
            inst.l.final_layer.push_back(Gate::rz(q, rng.uniform(0.0, kTwoPi)));
        }
        inst.l.trotter_order = opt.trotter_order;
        inst.l.trotter_r = opt.trotter_r;
    }
    return inst;
}

QpufInstance qgen(Arch arch, std::size_t n_qubits, std::uint64_t master_seed, std::uint64_t device_index,
                  const GenOptions& options) {
    return qgen_from_seed(arch, n_qubits, hash64(master_seed, "inst", device_index), options);
}

QpufInstance jitter_rates(const QpufInstance& instance, double fraction, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction < 1.0)) {
        throw std::invalid_argument("jitter fraction must lie in [0, 1)");
    }
    QpufInstance out = instance;
    Rng rng(hash64(seed, "jitter"));
    auto scale = [&](double& x) { x *= 1.0 + fraction * rng.uniform(-1.0, 1.0); };
    for (auto* v : {&out.d.amp_rate, &out.d.phase_rate, &out.d.depol_rate}) {
        for (auto& x : *v) scale(x);
    }
    for (auto& b : out.l.blocks) {
        for (auto& x : b.gamma_ad) scale(x);
        for (auto& x : b.gamma_phi) scale(x);
        scale(b.gamma_collective);
        scale(b.gamma_pairwise);
    }
    return out;
}

Circuit dqpuf_build(const QpufInstance& inst, const std::string& challenge, bool terminal_measure) {
    check_arch(inst, {Arch::D}, "dqpuf_build");
    validate_challenge(challenge, inst.n_qubits);
    const auto k = dqpuf_noise_coeffs(challenge);
    Circuit c(inst.n_qubits, inst.n_qubits);
    encode_challenge(c, challenge);
    layers_1_to_2(c, inst, k);
    layer_3(c, inst, k);
    layers_4_to_5(c, inst, k, challenge);
    if (terminal_measure) c.measure_all();
    return c;
}

Circuit mfqpuf_build(const QpufInstance& inst, const std::string& challenge, bool terminal_measure) {
    check_arch(inst, {Arch::MF}, "mfqpuf_build");
    validate_challenge(challenge, inst.n_qubits);
    const std::size_t n = inst.n_qubits;
    const auto k = dqpuf_noise_coeffs(challenge);
    Circuit c(n, n + inst.mf.rounds.size());
    encode_challenge(c, challenge);
    layers_1_to_2(c, inst, k);
    for (std::size_t r = 0; r < inst.mf.rounds.size(); ++r) {
        const auto& fr = inst.mf.rounds[r];
        const std::size_t slot = n + r;
        c.measure({fr.measured}, {slot});
        std::vector<Gate> on_one, on_zero;
        std::vector<std::size_t> odd, even, rest;
        for (std::size_t q = 0; q < n; ++q) {
            if (q == fr.measured) continue;
            (q % 2 ? odd : even).push_back(q);
            rest.push_back(q);
        }
        if (odd.empty()) odd = rest;
        if (even.empty()) even = rest;
        if (!inst.mf.identity_feedback) {
            for (std::size_t q : odd) {
                on_one.push_back(fr.one_uses_h ? Gate::h(q) : Gate::rz(q, fr.one_theta));
            }
            for (std::size_t q : even) {
                on_zero.push_back(fr.zero_kind == GateKind::S ? Gate::s(q) : Gate{fr.zero_kind, {q}, fr.zero_theta});
            }
        }
        c.conditional(slot, 1, std::move(on_one));
        c.conditional(slot, 0, std::move(on_zero));
        add_noise_layer(c, inst, k);
    }
    layer_3(c, inst, k);
    layers_4_to_5(c, inst, k, challenge);
    if (terminal_measure) c.measure_all();
    return c;
}

std::vector<std::pair<double, double>> extract_rotation_encoding(const DensityMatrix& rho) {
    std::vector<std::pair<double, double>> out;
    for (std::size_t q = 0; q < rho.n_qubits(); ++q) {
        const std::size_t keep[1] = {q};
        const DensityMatrix r = partial_trace(rho, keep);
        const double rx = 2.0 * r(0, 1).real();
        const double ry = -2.0 * r(0, 1).imag();
        const double rz = (r(0, 0) - r(1, 1)).real();
        const double norm = std::sqrt(rx * rx + ry * ry + rz * rz);
        const double ty = norm == 0.0 ? 0.0 : std::acos(std::clamp(rz / norm, -1.0, 1.0));
        out.emplace_back(ty, std::atan2(ry, rx));
    }
    return out;
}

}  // namespace qpufsim
