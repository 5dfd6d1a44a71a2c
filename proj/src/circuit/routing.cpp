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
#include <deque>
#include <stdexcept>
#include <string>

#include "qpufsim/circuit.hpp"

namespace qpufsim {

Topology::Topology(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges)
    : n_(n), edges_(std::move(edges)), adj_(n) {
    for (auto& [a, b] : edges_) {
        if (a >= n_ || b >= n_) {
            throw std::out_of_range("edge endpoint outside topology");
        }
        if (a == b) {
            throw std::invalid_argument("topology has a self-loop on qubit " + std::to_string(a));
        }
        if (a > b) {
            std::swap(a, b);
        }
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    for (const auto& [a, b] : edges_) {
        adj_[a].push_back(b);
        adj_[b].push_back(a);
    }
    for (auto& list : adj_) {
        std::sort(list.begin(), list.end());
    }
    if (n_ == 0) {
        throw std::invalid_argument("topology needs at least one qubit");
    }
    std::vector<bool> seen(n_, false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
        const std::size_t q = queue.front();
        queue.pop_front();
        for (std::size_t r : adj_[q]) {
            if (!seen[r]) {
                seen[r] = true;
                ++reached;
                queue.push_back(r);
            }
        }
    }
    if (reached != n_) {
        throw std::invalid_argument("topology is not connected");
    }
}

Topology Topology::from_edges(std::size_t n_physical, std::vector<std::pair<std::size_t, std::size_t>> edges) {
    return Topology(n_physical, std::move(edges));
}

Topology Topology::path(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        e.emplace_back(i, i + 1);
    }
    return Topology(n, std::move(e));
}

Topology Topology::star(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 1; i < n; ++i) {
        e.emplace_back(0, i);
    }
    return Topology(n, std::move(e));
}

Topology Topology::full(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            e.emplace_back(i, j);
        }
    }
    return Topology(n, std::move(e));
}

Topology Topology::melbourne() {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i < 6; ++i) {
        e.emplace_back(i, i + 1);
        e.emplace_back(i + 7, i + 8);
    }
    for (std::size_t i = 0; i < 7; ++i) {
        e.emplace_back(i, i + 7);
    }
    e.emplace_back(13, 14);
    return Topology(15, std::move(e));
}

bool Topology::adjacent(std::size_t a, std::size_t b) const {
    if (a >= n_ || b >= n_) {
        throw std::out_of_range("qubit outside topology");
    }
    return std::binary_search(adj_[a].begin(), adj_[a].end(), b);
}

std::size_t Topology::degree(std::size_t q) const {
    if (q >= n_) {
        throw std::out_of_range("qubit outside topology");
    }
    return adj_[q].size();
}

std::vector<std::size_t> Topology::shortest_path(std::size_t a, std::size_t b) const {
    if (a >= n_ || b >= n_) {
        throw std::out_of_range("qubit outside topology");
    }
    std::vector<std::size_t> parent(n_, n_);
    std::deque<std::size_t> queue{a};
    parent[a] = a;
    while (!queue.empty() && parent[b] == n_) {
        const std::size_t q = queue.front();
        queue.pop_front();
        for (std::size_t r : adj_[q]) {
            if (parent[r] == n_) {
                parent[r] = q;
                queue.push_back(r);
            }
        }
    }
    std::vector<std::size_t> path{b};
    while (path.back() != a) {
        path.push_back(parent[path.back()]);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

Topology Topology::induced(std::size_t k) const {
    if (k > n_) {
        throw std::invalid_argument("requested " + std::to_string(k) + " qubits from a " + std::to_string(n_) +
                                    "-qubit topology");
    }
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (const auto& [a, b] : edges_) {
        if (a < k && b < k) {
            e.emplace_back(a, b);
        }
    }
    return Topology(k, std::move(e));
}

RoutedCircuit route(const Circuit& circuit, const Topology& topology, std::vector<std::size_t> layout) {
    const std::size_t n_logical = circuit.n_qubits();
    const std::size_t n_phys = topology.n_physical();
    if (n_logical > n_phys) {
        throw std::invalid_argument("circuit needs " + std::to_string(n_logical) + " qubits but topology has " +
                                    std::to_string(n_phys));
    }
    if (layout.size() != n_logical) {
        throw std::invalid_argument("layout size does not match circuit width");
    }
    std::vector<std::size_t> at_phys(n_phys, n_logical);  // physical -> logical, n_logical if free
    for (std::size_t l = 0; l < n_logical; ++l) {
        if (layout[l] >= n_phys || at_phys[layout[l]] != n_logical) {
            throw std::invalid_argument("layout is not an injective map into the topology");
        }
        at_phys[layout[l]] = l;
    }

    RoutedCircuit out{Circuit(n_phys, circuit.n_clbits()), {}, 0};
    auto swap_phys = [&](std::size_t p, std::size_t q) {
        out.circuit.add(Gate::cx(p, q));
        out.circuit.add(Gate::cx(q, p));
        out.circuit.add(Gate::cx(p, q));
        const std::size_t lp = at_phys[p];
        const std::size_t lq = at_phys[q];
        at_phys[p] = lq;
        at_phys[q] = lp;
        if (lp < n_logical) layout[lp] = q;
        if (lq < n_logical) layout[lq] = p;
        ++out.swaps;
    };
    // Moves logical a along a shortest path until it neighbours logical b.
    auto bring_adjacent = [&](std::size_t a, std::size_t b) {
        if (topology.adjacent(layout[a], layout[b])) {
            return;
        }
        const std::vector<std::size_t> path = topology.shortest_path(layout[a], layout[b]);
        for (std::size_t k = 0; k + 2 < path.size(); ++k) {
            swap_phys(path[k], path[k + 1]);
        }
    };
    auto remap = [&](const Gate& g) {
        Gate r = g;
        for (auto& q : r.qubits) {
            q = layout[q];
        }
        return r;
    };

    for (const auto& op : circuit.ops()) {
        if (const auto* g = std::get_if<Gate>(&op)) {
            if (g->qubits.size() == 2) {
                bring_adjacent(g->qubits[0], g->qubits[1]);
            }
            out.circuit.add(remap(*g));
        } else if (const auto* m = std::get_if<MeasureOp>(&op)) {
            std::vector<std::size_t> q;
            for (std::size_t l : m->qubits) {
                q.push_back(layout[l]);
            }
            out.circuit.measure(q, m->slots);
        } else if (const auto* c = std::get_if<ConditionalOp>(&op)) {
            // SWAPs needed by conditional two-qubit gates are inserted unconditionally.
            std::vector<Gate> gates;
            for (const auto& cg : c->gates) {
                if (cg.qubits.size() == 2) {
                    bring_adjacent(cg.qubits[0], cg.qubits[1]);
                }
            }
            for (const auto& cg : c->gates) {
                if (cg.qubits.size() == 2 && !topology.adjacent(layout[cg.qubits[0]], layout[cg.qubits[1]])) {
                    throw std::invalid_argument("conditional block needs incompatible qubit placements");
                }
                gates.push_back(remap(cg));
            }
            out.circuit.conditional(c->slot, c->value, std::move(gates));
        } else if (const auto* ch = std::get_if<ChannelOp>(&op)) {
            if (ch->qubits.size() == 2) {
                bring_adjacent(ch->qubits[0], ch->qubits[1]);
            }
            ChannelOp r = *ch;
            for (auto& q : r.qubits) {
                q = layout[q];
            }
            out.circuit.channel(std::move(r));
        }
    }
    out.final_layout = layout;
    return out;
}

}  // namespace qpufsim
