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

#include "qpufsim/executor.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

#include "qpufsim/kernels.hpp"
#include "qpufsim/random.hpp"

namespace qpufsim {

bool NoisePolicy::empty() const {
    auto none = [](const std::vector<std::optional<KrausChannel>>& v) {
        return std::none_of(v.begin(), v.end(), [](const auto& c) { return c.has_value(); });
    };
    return none(after_single) && none(after_two) && none(before_measure) &&
           std::all_of(readout_flip.begin(), readout_flip.end(), [](double e) { return e == 0.0; });
}

namespace {

/// Superoperators of a NoisePolicy, sized to the circuit width.
struct CompiledNoise {
    std::vector<ComplexMatrix> single;
    std::vector<ComplexMatrix> two;
    std::vector<ComplexMatrix> measure;
    std::vector<double> flip;

    CompiledNoise(const NoisePolicy& p, std::size_t n) : single(n), two(n), measure(n), flip(n, 0.0) {
        auto load = [n](const std::vector<std::optional<KrausChannel>>& src, std::vector<ComplexMatrix>& dst) {
            if (src.size() > n) {
                throw std::invalid_argument("noise policy wider than circuit");
            }
            for (std::size_t q = 0; q < src.size(); ++q) {
                if (src[q]) {
                    if (src[q]->dim_in() != 2 || src[q]->dim_out() != 2) {
                        throw std::invalid_argument("noise policy channels must be single-qubit");
                    }
                    dst[q] = superoperator(*src[q]);
                }
            }
        };
        load(p.after_single, single);
        load(p.after_two, two);
        load(p.before_measure, measure);
        if (p.readout_flip.size() > n) {
            throw std::invalid_argument("readout flip vector wider than circuit");
        }
        std::copy(p.readout_flip.begin(), p.readout_flip.end(), flip.begin());
    }
};

void apply_local_superop(ComplexMatrix& rho, const ComplexMatrix& s, std::size_t q, std::size_t n) {
    if (s.size() == 0) {
        return;
    }
    const std::size_t qs[1] = {q};
    apply_superop(rho, s, qs, n);
}

void apply_noisy_gate(ComplexMatrix& rho, const Gate& g, const CompiledNoise& noise, std::size_t n) {
    conjugate(rho, gate_matrix(g), g.qubits, n);
    const auto& table = g.qubits.size() == 1 ? noise.single : noise.two;
    for (std::size_t q : g.qubits) {
        apply_local_superop(rho, table[q], q, n);
    }
}

void apply_channel_op(ComplexMatrix& rho, const ChannelOp& op, std::size_t n) {
    apply_superop(rho, superoperator(op.channel), op.qubits, n);
}

bool touches(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    return std::any_of(a.begin(), a.end(), [&](std::size_t x) { return std::find(b.begin(), b.end(), x) != b.end(); });
}

/// A measurement is terminal when no later op touches its qubits or reads its slots.
std::vector<bool> terminal_flags(const Circuit& c) {
    const auto& ops = c.ops();
    std::vector<bool> flags(ops.size(), false);
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const auto* m = std::get_if<MeasureOp>(&ops[i]);
        if (!m) {
            continue;
        }
        bool terminal = true;
        for (std::size_t j = i + 1; j < ops.size() && terminal; ++j) {
            if (const auto* g = std::get_if<Gate>(&ops[j])) {
                terminal = !touches(g->qubits, m->qubits);
            } else if (const auto* ch = std::get_if<ChannelOp>(&ops[j])) {
                terminal = !touches(ch->qubits, m->qubits);
            } else if (const auto* cond = std::get_if<ConditionalOp>(&ops[j])) {
                if (std::find(m->slots.begin(), m->slots.end(), cond->slot) != m->slots.end()) {
                    terminal = false;
                }
                for (const auto& g : cond->gates) {
                    terminal = terminal && !touches(g.qubits, m->qubits);
                }
            }
        }
        flags[i] = terminal;
    }
    return flags;
}

double flip_weight(std::size_t true_bits, std::size_t recorded, const std::vector<std::size_t>& qubits,
                   const std::vector<double>& flip) {
    double w = 1.0;
    const std::size_t k = qubits.size();
    for (std::size_t j = 0; j < k; ++j) {
        const bool differs = (((true_bits ^ recorded) >> (k - 1 - j)) & 1) != 0;
        const double e = flip[qubits[j]];
        w *= differs ? e : 1.0 - e;
    }
    return w;
}

void write_slots(std::string& reg, const std::vector<std::size_t>& slots, std::size_t value) {
    const std::size_t k = slots.size();
    for (std::size_t j = 0; j < k; ++j) {
        reg[slots[j]] = ((value >> (k - 1 - j)) & 1) ? '1' : '0';
    }
}

double real_trace(const ComplexMatrix& m) { return m.trace().real(); }

}  // namespace

DensityMatrix apply_gate(const DensityMatrix& rho, const Gate& gate) {
    if (gate.qubits.size() != gate_arity(gate.kind)) {
        throw std::invalid_argument("gate has wrong number of qubits");
    }
    ComplexMatrix m = rho.matrix();
    conjugate(m, gate_matrix(gate), gate.qubits, rho.n_qubits());
    return DensityMatrix::unchecked(std::move(m));
}

ExactRun run_exact(const Circuit& circuit, const DensityMatrix& rho0, const NoisePolicy& policy) {
    const std::size_t n = circuit.n_qubits();
    if (rho0.n_qubits() != n) {
        throw std::invalid_argument("initial state width does not match circuit");
    }
    const CompiledNoise noise(policy, n);
    const std::vector<bool> terminal = terminal_flags(circuit);

    std::map<std::string, ComplexMatrix> branches;  // unnormalized, keyed by register
    branches.emplace(std::string(circuit.n_clbits(), '0'), rho0.matrix());
    std::vector<std::pair<std::size_t, std::size_t>> deferred;  // (slot, qubit)

    const auto& ops = circuit.ops();
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const auto& op = ops[i];
        if (const auto* g = std::get_if<Gate>(&op)) {
            for (auto& [reg, sigma] : branches) {
                apply_noisy_gate(sigma, *g, noise, n);
            }
        } else if (const auto* ch = std::get_if<ChannelOp>(&op)) {
            for (auto& [reg, sigma] : branches) {
                apply_channel_op(sigma, *ch, n);
            }
        } else if (const auto* cond = std::get_if<ConditionalOp>(&op)) {
            const char want = cond->value ? '1' : '0';
            for (auto& [reg, sigma] : branches) {
                if (reg[cond->slot] == want) {
                    for (const auto& cg : cond->gates) {
                        apply_noisy_gate(sigma, cg, noise, n);
                    }
                }
            }
        } else if (const auto* m = std::get_if<MeasureOp>(&op)) {
            for (auto& [reg, sigma] : branches) {
                for (std::size_t q : m->qubits) {
                    apply_local_superop(sigma, noise.measure[q], q, n);
                }
            }
            for (std::size_t s : m->slots) {
                std::erase_if(deferred, [s](const auto& e) { return e.first == s; });
            }
            if (terminal[i]) {
                for (auto& [reg, sigma] : branches) {
                    dephase(sigma, m->qubits, n);
                }
                for (std::size_t j = 0; j < m->qubits.size(); ++j) {
                    deferred.emplace_back(m->slots[j], m->qubits[j]);
                }
                continue;
            }
            const std::size_t outcomes = std::size_t{1} << m->qubits.size();
            std::map<std::string, ComplexMatrix> next;
            for (const auto& [reg, sigma] : branches) {
                for (std::size_t b = 0; b < outcomes; ++b) {
                    ComplexMatrix proj = sigma;
                    project(proj, m->qubits, b, n);
                    if (real_trace(proj) < kBranchCutoff) {
                        continue;
                    }
                    for (std::size_t r = 0; r < outcomes; ++r) {
                        const double w = flip_weight(b, r, m->qubits, noise.flip);
                        if (w == 0.0) {
                            continue;
                        }
                        std::string child = reg;
                        write_slots(child, m->slots, r);
                        auto it = next.find(child);
                        if (it == next.end()) {
                            next.emplace(std::move(child), w * proj);
                        } else {
                            it->second += w * proj;
                        }
                    }
                }
            }
            std::erase_if(next, [](const auto& kv) { return real_trace(kv.second) < kBranchCutoff; });
            branches = std::move(next);
        }
    }

    ExactRun run{DensityMatrix(), {}, {}};
    const auto d = static_cast<Eigen::Index>(dim_for_qubits(n));
    ComplexMatrix mixture = ComplexMatrix::Zero(d, d);

    // Distinct deferred qubits, in first-use order.
    std::vector<std::size_t> dq;
    for (const auto& [slot, q] : deferred) {
        if (std::find(dq.begin(), dq.end(), q) == dq.end()) {
            dq.push_back(q);
        }
    }
    std::vector<double> dq_flip;
    for (std::size_t q : dq) {
        dq_flip.push_back(noise.flip[q]);
    }
    const ReadoutMatrix readout = ReadoutMatrix::symmetric_flips(dq_flip);
    const LocalIndex didx = local_index(dq, n);

    for (const auto& [reg, sigma] : branches) {
        const double p = real_trace(sigma);
        run.ledger.push_back({reg, p});
        mixture += sigma;
        RealVector marg = RealVector::Zero(static_cast<Eigen::Index>(didx.offsets.size()));
        for (std::size_t x = 0; x < didx.offsets.size(); ++x) {
            double acc = 0.0;
            for (std::size_t base : didx.bases) {
                const auto k = static_cast<Eigen::Index>(base | didx.offsets[x]);
                acc += std::max(sigma(k, k).real(), 0.0);
            }
            marg(static_cast<Eigen::Index>(x)) = acc;
        }
        const double total = marg.sum();
        if (total <= 0.0) {
            continue;
        }
        const RealVector observed = apply_readout(readout, marg / total) * p;
        for (Eigen::Index x = 0; x < observed.size(); ++x) {
            if (observed(x) <= 0.0) {
                continue;
            }
            std::string full = reg;
            for (const auto& [slot, q] : deferred) {
                const std::size_t pos = static_cast<std::size_t>(std::find(dq.begin(), dq.end(), q) - dq.begin());
                full[slot] = ((static_cast<std::size_t>(x) >> (dq.size() - 1 - pos)) & 1) ? '1' : '0';
            }
            run.distribution[full] += observed(x);
        }
    }
    run.state = DensityMatrix::unchecked(std::move(mixture));
    return run;
}

namespace {

/// Lazily expanded outcome tree for run_sampled. A node holds the state right
/// before a mid-circuit measurement, or the final outcome law of a trailing
/// block of measurements.
struct SampleNode {
    std::size_t op = 0;
    std::string reg;
    ComplexMatrix rho;
    bool final_block = false;
    std::vector<double> cdf;            // over true outcomes b (mid) or basis index (final)
    std::vector<ComplexMatrix> posts;   // mid only: normalized post-state per outcome
    std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<SampleNode>> children;  // (b, recorded)
};

class Sampler {
  public:
    Sampler(const Circuit& c, const NoisePolicy& p) : circuit_(c), noise_(p, c.n_qubits()), n_(c.n_qubits()) {}

    std::unique_ptr<SampleNode> make_node(ComplexMatrix rho, std::string reg, std::size_t start) {
        const auto& ops = circuit_.ops();
        std::size_t i = start;
        for (; i < ops.size(); ++i) {
            const auto& op = ops[i];
            if (std::holds_alternative<MeasureOp>(op)) {
                break;
            }
            if (const auto* g = std::get_if<Gate>(&op)) {
                apply_noisy_gate(rho, *g, noise_, n_);
            } else if (const auto* ch = std::get_if<ChannelOp>(&op)) {
                apply_channel_op(rho, *ch, n_);
            } else if (const auto* cond = std::get_if<ConditionalOp>(&op)) {
                if (reg[cond->slot] == (cond->value ? '1' : '0')) {
                    for (const auto& cg : cond->gates) {
                        apply_noisy_gate(rho, cg, noise_, n_);
                    }
                }
            }
        }
        auto node = std::make_unique<SampleNode>();
        node->op = i;
        node->reg = std::move(reg);
        bool rest_measure = true;
        for (std::size_t j = i; j < ops.size(); ++j) {
            rest_measure = rest_measure && std::holds_alternative<MeasureOp>(ops[j]);
        }
        node->final_block = rest_measure;
        if (rest_measure) {
            for (std::size_t j = i; j < ops.size(); ++j) {
                for (std::size_t q : std::get<MeasureOp>(ops[j]).qubits) {
                    apply_local_superop(rho, noise_.measure[q], q, n_);
                }
            }
            double acc = 0.0;
            for (Eigen::Index k = 0; k < rho.rows(); ++k) {
                acc += std::max(rho(k, k).real(), 0.0);
                node->cdf.push_back(acc);
            }
        } else {
            const auto& m = std::get<MeasureOp>(ops[i]);
            for (std::size_t q : m.qubits) {
                apply_local_superop(rho, noise_.measure[q], q, n_);
            }
            double acc = 0.0;
            for (std::size_t b = 0; b < (std::size_t{1} << m.qubits.size()); ++b) {
                ComplexMatrix proj = rho;
                project(proj, m.qubits, b, n_);
                const double p = real_trace(proj);
                if (p >= kBranchCutoff) {
                    acc += p;
                    proj /= p;
                }
                node->cdf.push_back(acc);
                node->posts.push_back(std::move(proj));
            }
        }
        node->rho = std::move(rho);
        return node;
    }

    std::string shot(SampleNode& root, Rng& rng) {
        SampleNode* node = &root;
        const auto& ops = circuit_.ops();
        while (true) {
            const std::size_t pick = draw(node->cdf, rng);
            if (node->final_block) {
                std::string reg = node->reg;
                for (std::size_t j = node->op; j < ops.size(); ++j) {
                    const auto& m = std::get<MeasureOp>(ops[j]);
                    for (std::size_t t = 0; t < m.qubits.size(); ++t) {
                        const std::size_t q = m.qubits[t];
                        bool bit = ((pick >> (n_ - 1 - q)) & 1) != 0;
                        if (noise_.flip[q] > 0.0 && rng.uniform() < noise_.flip[q]) {
                            bit = !bit;
                        }
                        reg[m.slots[t]] = bit ? '1' : '0';
                    }
                }
                return reg;
            }
            const auto& m = std::get<MeasureOp>(ops[node->op]);
            std::size_t recorded = pick;
            for (std::size_t t = 0; t < m.qubits.size(); ++t) {
                const double e = noise_.flip[m.qubits[t]];
                if (e > 0.0 && rng.uniform() < e) {
                    recorded ^= std::size_t{1} << (m.qubits.size() - 1 - t);
                }
            }
            auto& child = node->children[{pick, recorded}];
            if (!child) {
                std::string reg = node->reg;
                write_slots(reg, m.slots, recorded);
                child = make_node(node->posts[pick], std::move(reg), node->op + 1);
            }
            node = child.get();
        }
    }

  private:
    static std::size_t draw(const std::vector<double>& cdf, Rng& rng) {
        const double u = rng.uniform() * cdf.back();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t k = static_cast<std::size_t>(it - cdf.begin());
        k = std::min(k, cdf.size() - 1);
        // Skip zero-width bins that upper_bound can land on at the boundary.
        while (k > 0 && cdf[k] == cdf[k - 1]) {
            --k;
        }
        return k;
    }

    const Circuit& circuit_;
    CompiledNoise noise_;
    std::size_t n_;
};

}  // namespace

Histogram run_sampled(const Circuit& circuit, const DensityMatrix& rho0, std::uint64_t shots, std::uint64_t seed,
                      const NoisePolicy& noise) {
    if (shots == 0) {
        throw std::invalid_argument("shots must be positive");
    }
    if (circuit.ops().empty() || !std::holds_alternative<MeasureOp>(circuit.ops().back())) {
        throw std::invalid_argument("sampled execution needs a terminal measurement");
    }
    if (rho0.n_qubits() != circuit.n_qubits()) {
        throw std::invalid_argument("initial state width does not match circuit");
    }
    Sampler sampler(circuit, noise);
    auto root = sampler.make_node(rho0.matrix(), std::string(circuit.n_clbits(), '0'), 0);
    Rng rng(seed);
    Histogram hist;
    for (std::uint64_t s = 0; s < shots; ++s) {
        ++hist[sampler.shot(*root, rng)];
    }
    return hist;
}

Histogram sample_distribution(const std::map<std::string, double>& distribution, std::uint64_t shots,
                              std::uint64_t seed) {
    if (distribution.empty()) {
        throw std::invalid_argument("cannot sample an empty distribution");
    }
    std::vector<const std::string*> keys;
    std::vector<double> cdf;
    double acc = 0.0;
    for (const auto& [k, p] : distribution) {
        if (p <= 0.0) {
            continue;
        }
        acc += p;
        keys.push_back(&k);
        cdf.push_back(acc);
    }
    if (keys.empty()) {
        throw std::invalid_argument("distribution has no positive mass");
    }
    Rng rng(seed);
    Histogram hist;
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform() * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t k = std::min(static_cast<std::size_t>(it - cdf.begin()), keys.size() - 1);
        ++hist[*keys[k]];
    }
    return hist;
}

std::map<std::string, double> marginal_prefix(const std::map<std::string, double>& distribution, std::size_t n_slots) {
    std::map<std::string, double> out;
    for (const auto& [k, p] : distribution) {
        if (k.size() < n_slots) {
            throw std::invalid_argument("register shorter than requested prefix");
        }
        out[k.substr(0, n_slots)] += p;
    }
    return out;
}

}  // namespace qpufsim
