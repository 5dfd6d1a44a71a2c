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
#include <bit>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <utility>

#include "json.hpp"
#include "qpufsim/kernels.hpp"
#include "qpufsim/qpuf.hpp"
#include "qpufsim/random.hpp"

namespace qpufsim {

namespace {

std::vector<Circuit> lqpuf_segments(const QpufInstance& inst, const std::string& challenge) {
    const std::size_t n = inst.n_qubits;
    const auto& blocks = inst.l.blocks;
    std::vector<Circuit> segs(blocks.size() + 1, Circuit(n, 0));
    Circuit& first = segs[0];
    for (std::size_t q = 0; q < n; ++q) {
        if (challenge[q] == '1') first.add(Gate::x(q));
    }
    for (std::size_t q = 0; q < n; ++q) first.add(Gate::h(q));
    for (std::size_t q = 0; q + 1 < n; ++q) first.add(Gate::cx(q, q + 1));
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        Circuit& c = segs[k];
        c.add(Gate::cx(blocks[k].cx.first, blocks[k].cx.second));
        for (std::size_t q = 0; q < n; ++q) {
            c.add(Gate::ry(q, blocks[k].ry[q]));
            c.add(Gate::rz(q, blocks[k].rz[q]));
        }
    }
    for (const auto& g : inst.l.final_layer) segs.back().add(g);
    return segs;
}

TrotterPropagator lqpuf_window(const QpufInstance& inst, const LindbladBlock& b) {
    const std::size_t n = inst.n_qubits;
    std::vector<TrotterPiece> pieces;
    for (std::size_t q = 0; q < n; ++q) {
        std::vector<JumpOperator> js = {jump_amplitude_damping(0, 1, b.gamma_ad[q]), jump_dephasing(0, 1, b.gamma_phi[q])};
        pieces.push_back({{q}, LindbladGenerator(1, b.h[q] * pauli_matrix(Pauli::X), std::move(js))});
    }
    const auto d = static_cast<Eigen::Index>(dim_for_qubits(n));
    const ComplexMatrix zero = ComplexMatrix::Zero(d, d);
    pieces.push_back({{}, LindbladGenerator(n, zero, {jump_collective(b.collective, default_collective_coeffs(n), n,
                                                                      b.gamma_collective)})});
    pieces.push_back({{}, LindbladGenerator(n, zero, {jump_pairwise(b.pairwise, default_pairwise_coeffs(n), n,
                                                                    b.gamma_pairwise)})});
    return TrotterPropagator(n, std::move(pieces), {inst.l.trotter_order, b.tau, inst.l.trotter_r});
}

/// Window propagators of recently used instances, keyed by parameter digest.
const TrotterPropagator& cached_window(const QpufInstance& inst, std::size_t block) {
    constexpr std::size_t kMaxEntries = 32;
    thread_local std::map<std::pair<std::uint64_t, std::size_t>, TrotterPropagator> cache;
    const auto key = std::make_pair(params_digest(inst), block);
    auto it = cache.find(key);
    if (it == cache.end()) {
        if (cache.size() >= kMaxEntries) cache.clear();
        it = cache.emplace(key, lqpuf_window(inst, inst.l.blocks[block])).first;
    }
    return it->second;
}

std::vector<std::size_t> identity_layout(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    return v;
}

/// With a profile the circuit is routed and the result relabelled back to logical
/// order; `layout` receives the physical qubit of each logical one.
ComplexMatrix run_segment(const Circuit& c, const DensityMatrix& rho, const BackendProfile* profile,
                          const NoisePolicy& policy, std::vector<std::size_t>* layout) {
    const std::size_t n = c.n_qubits();
    if (!profile) {
        if (layout) *layout = identity_layout(n);
        return run_exact(c, rho).state.matrix();
    }
    const RoutedCircuit routed = route(c, profile->topology, identity_layout(n));
    const ExactRun run = run_exact(routed.circuit, rho, policy);
    if (layout) *layout = routed.final_layout;
    return permute_qubits(run.state.matrix(), routed.final_layout, n);
}

std::map<std::string, double> terminal_distribution(ComplexMatrix rho, const NoisePolicy& policy,
                                                    const std::vector<std::size_t>& layout) {
    const std::size_t n = layout.size();
    std::vector<double> flips(n, 0.0);
    bool any_flip = false;
    for (std::size_t l = 0; l < n; ++l) {
        const std::size_t p = layout[l];
        if (p < policy.before_measure.size() && policy.before_measure[p]) {
            const std::size_t qs[1] = {l};
            apply_superop(rho, superoperator(*policy.before_measure[p]), qs, n);
        }
        if (p < policy.readout_flip.size()) {
            flips[l] = policy.readout_flip[p];
            any_flip = any_flip || flips[l] > 0.0;
        }
    }
    RealVector probs = rho.diagonal().real().cwiseMax(0.0);
    probs /= probs.sum();
    if (any_flip) {
        probs = apply_readout(ReadoutMatrix::symmetric_flips(flips), probs);
    }
    std::map<std::string, double> out;
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
        out.emplace(index_to_bits(static_cast<std::size_t>(i), n), probs(i));
    }
    return out;
}

Circuit strip_encoding(const Circuit& c, const std::string& challenge) {
    const auto k = static_cast<std::size_t>(std::count(challenge.begin(), challenge.end(), '1'));
    Circuit out(c.n_qubits(), c.n_clbits());
    for (std::size_t i = k; i < c.ops().size(); ++i) out.append(c.ops()[i]);
    return out;
}

void mix_double(std::uint64_t& h, double x) { h = mix64(h ^ std::bit_cast<std::uint64_t>(x)); }

}  // namespace

DensityMatrix lqpuf_eval(const QpufInstance& inst, const std::string& challenge) {
    return evaluate_exact(inst, challenge).state;
}

ExactOutput evaluate_exact(const QpufInstance& inst, const std::string& challenge, const BackendProfile* profile) {
    validate_challenge(challenge, inst.n_qubits);
    const std::size_t n = inst.n_qubits;
    BackendProfile restricted;
    NoisePolicy policy;
    if (profile) {
        restricted = profile->restricted(n);
        policy = noise_policy(restricted, n);
        profile = &restricted;
    }
    std::vector<std::size_t> layout = identity_layout(n);
    ComplexMatrix rho;
    if (inst.arch == Arch::L) {
        const auto segs = lqpuf_segments(inst, challenge);
        rho = DensityMatrix::zero_state(n).matrix();
        for (std::size_t k = 0; k < segs.size(); ++k) {
            rho = run_segment(segs[k], DensityMatrix::unchecked(std::move(rho)), profile, policy, nullptr);
            if (k < inst.l.blocks.size()) {
                cached_window(inst, k).apply(rho);
            }
        }
    } else {
        const Circuit c = inst.arch == Arch::D ? dqpuf_build(inst, challenge, false) : mfqpuf_build(inst, challenge, false);
        rho = run_segment(c, DensityMatrix::zero_state(n), profile, policy, &layout);
    }
    ExactOutput out;
    out.distribution = terminal_distribution(rho, policy, layout);
    out.state = DensityMatrix::unchecked(std::move(rho));
    return out;
}

DensityMatrix apply_instance_channel(const QpufInstance& inst, const std::string& challenge,
                                     const DensityMatrix& input) {
    validate_challenge(challenge, inst.n_qubits);
    if (input.n_qubits() != inst.n_qubits) {
        throw std::invalid_argument("channel input width does not match the instance");
    }
    if (inst.arch != Arch::L) {
        const Circuit c = inst.arch == Arch::D ? dqpuf_build(inst, challenge, false) : mfqpuf_build(inst, challenge, false);
        return run_exact(strip_encoding(c, challenge), input).state;
    }
    auto segs = lqpuf_segments(inst, challenge);
    segs[0] = strip_encoding(segs[0], challenge);
    ComplexMatrix rho = input.matrix();
    for (std::size_t k = 0; k < segs.size(); ++k) {
        rho = run_exact(segs[k], DensityMatrix::unchecked(std::move(rho))).state.matrix();
        if (k < inst.l.blocks.size()) cached_window(inst, k).apply(rho);
    }
    return DensityMatrix::unchecked(std::move(rho));
}

std::string majority_vote(const Histogram& histogram, std::size_t n_bits) {
    std::vector<std::uint64_t> ones(n_bits, 0);
    std::uint64_t total = 0;
    for (const auto& [bits, count] : histogram) {
        if (bits.size() < n_bits) {
            throw std::invalid_argument("histogram key shorter than response width");
        }
        for (std::size_t i = 0; i < n_bits; ++i) {
            if (bits[i] == '1') ones[i] += count;
        }
        total += count;
    }
    std::string out(n_bits, '0');
    for (std::size_t i = 0; i < n_bits; ++i) {
        if (2 * ones[i] > total) out[i] = '1';
    }
    return out;
}

Response sample_response(const std::map<std::string, double>& distribution, std::size_t n_bits, std::uint64_t shots,
                         std::uint64_t seed) {
    if (shots == 0) {
        throw std::invalid_argument("shots must be positive");
    }
    Response r;
    r.histogram = sample_distribution(distribution, shots, seed);
    r.bits = majority_vote(r.histogram, n_bits);
    r.shots = shots;
    return r;
}

Response qeval(const QpufInstance& instance, const std::string& challenge, std::uint64_t shots, std::uint64_t seed,
               const BackendProfile* profile) {
    const ExactOutput out = evaluate_exact(instance, challenge, profile);
    return sample_response(out.distribution, instance.n_qubits, shots, seed);
}

std::uint64_t params_digest(const QpufInstance& inst) {
    std::uint64_t h = hash64(inst.seed, arch_name(inst.arch), inst.n_qubits);
    auto gates = [&](const std::vector<Gate>& gs) {
        for (const auto& g : gs) {
            h = mix64(h ^ static_cast<std::uint64_t>(g.kind));
            for (auto q : g.qubits) h = mix64(h ^ q);
            mix_double(h, g.theta);
        }
    };
    auto values = [&](const std::vector<double>& v) {
        for (double x : v) mix_double(h, x);
    };
    gates(inst.d.layer1);
    values(inst.d.layer3_theta);
    gates(inst.d.layer5);
    values(inst.d.amp_rate);
    values(inst.d.phase_rate);
    values(inst.d.depol_rate);
    mix_double(h, inst.d.noise_scale);
    for (const auto& r : inst.mf.rounds) {
        h = mix64(h ^ r.measured ^ (static_cast<std::uint64_t>(r.one_uses_h) << 32) ^
                  (static_cast<std::uint64_t>(r.zero_kind) << 40));
        mix_double(h, r.one_theta);
        mix_double(h, r.zero_theta);
    }
    for (const auto& b : inst.l.blocks) {
        h = mix64(h ^ b.cx.first ^ (b.cx.second << 16) ^ (static_cast<std::uint64_t>(b.collective) << 32) ^
                  (static_cast<std::uint64_t>(b.pairwise) << 40));
        for (const auto* v : {&b.ry, &b.rz, &b.h, &b.gamma_ad, &b.gamma_phi}) values(*v);
        mix_double(h, b.gamma_collective);
        mix_double(h, b.gamma_pairwise);
        mix_double(h, b.tau);
    }
    gates(inst.l.final_layer);
    h = mix64(h ^ static_cast<std::uint64_t>(inst.l.trotter_order) ^ (inst.l.trotter_r << 8));
    return h;
}

GenOptions options_of(const QpufInstance& inst) {
    GenOptions o;
    o.m = inst.l.blocks.size();
    o.f = inst.mf.rounds.size();
    if (!inst.l.blocks.empty()) o.tau = inst.l.blocks.front().tau;
    o.trotter_order = inst.l.trotter_order;
    o.trotter_r = inst.l.trotter_r;
    if (inst.arch != Arch::L) o.m = GenOptions{}.m;
    if (inst.arch != Arch::MF) o.f = GenOptions{}.f;
    return o;
}

std::string instance_to_json(const QpufInstance& inst) {
    char digest[17];
    std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(params_digest(inst)));
    const GenOptions o = options_of(inst);
    nlohmann::ordered_json j;
    j["arch"] = arch_name(inst.arch);
    j["n_qubits"] = inst.n_qubits;
    j["device_id"] = inst.device_id;
    j["seed"] = inst.seed;
    j["options"] = {{"m", o.m}, {"f", o.f}, {"tau", o.tau}, {"trotter_order", o.trotter_order},
                    {"trotter_r", o.trotter_r}};
    j["params_digest"] = digest;
    return j.dump(2);
}

QpufInstance instance_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        GenOptions o;
        if (j.contains("options")) {
            const auto& oj = j["options"];
            o.m = oj.value("m", o.m);
            o.f = oj.value("f", o.f);
            o.tau = oj.value("tau", o.tau);
            o.trotter_order = oj.value("trotter_order", o.trotter_order);
            o.trotter_r = oj.value("trotter_r", o.trotter_r);
        }
        QpufInstance inst = qgen_from_seed(parse_arch(j.at("arch").get<std::string>()),
                                           j.at("n_qubits").get<std::size_t>(), j.at("seed").get<std::uint64_t>(), o);
        if (j.contains("params_digest")) {
            char digest[17];
            std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(params_digest(inst)));
            if (j["params_digest"].get<std::string>() != digest) {
                throw std::invalid_argument("instance digest mismatch: file was produced by a different generator");
            }
        }
        return inst;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad instance JSON: ") + e.what());
    }
}

}  // namespace qpufsim
