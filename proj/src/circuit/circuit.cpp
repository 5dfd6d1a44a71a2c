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
#include <stdexcept>
#include <string>

#include "qpufsim/circuit.hpp"

namespace qpufsim {

KrausChannel noise_channel(NoiseKind kind, const std::vector<double>& params) {
    auto need = [&](std::size_t count) {
        if (params.size() != count) {
            throw std::invalid_argument("noise spec expects " + std::to_string(count) + " parameter(s)");
        }
    };
    switch (kind) {
        case NoiseKind::AmplitudeDamping:
            need(1);
            return amplitude_damping(params[0]);
        case NoiseKind::PhaseDamping:
            need(1);
            return phase_damping(params[0]);
        case NoiseKind::Depolarizing:
            need(1);
            return depolarizing(params[0]);
        case NoiseKind::Stack:
            need(3);
            return compose(amplitude_damping(params[0]), compose(phase_damping(params[1]), depolarizing(params[2])));
        case NoiseKind::Custom:
            break;
    }
    throw std::invalid_argument("custom noise has no parametric form");
}

ChannelOp ChannelOp::from_spec(NoiseKind kind, std::vector<double> params, std::size_t qubit) {
    ChannelOp op;
    op.channel = noise_channel(kind, params);
    op.kind = kind;
    op.params = std::move(params);
    op.qubits = {qubit};
    return op;
}

ChannelOp ChannelOp::custom(KrausChannel channel, std::vector<std::size_t> qubits) {
    if (channel.dim_in() != channel.dim_out() || channel.dim_in() != dim_for_qubits(qubits.size())) {
        throw std::invalid_argument("channel dimension does not match its qubit list");
    }
    ChannelOp op;
    op.kind = NoiseKind::Custom;
    op.qubits = std::move(qubits);
    op.channel = std::move(channel);
    return op;
}

Circuit::Circuit(std::size_t n_qubits, std::size_t n_clbits)
    : n_qubits_(n_qubits), n_clbits_(n_clbits), written_(n_clbits, false) {
    dim_for_qubits(n_qubits);
}

void Circuit::check_qubits(const std::vector<std::size_t>& qubits) const {
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        if (qubits[i] >= n_qubits_) {
            throw std::out_of_range("qubit " + std::to_string(qubits[i]) + " outside circuit width " +
                                    std::to_string(n_qubits_));
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (qubits[j] == qubits[i]) {
                throw std::invalid_argument("repeated qubit " + std::to_string(qubits[i]) + " in operation");
            }
        }
    }
}

void Circuit::check_gate(const Gate& gate) const {
    if (gate.qubits.size() != gate_arity(gate.kind)) {
        throw std::invalid_argument(gate_name(gate.kind) + " expects " + std::to_string(gate_arity(gate.kind)) +
                                    " qubit(s)");
    }
    check_qubits(gate.qubits);
}

Circuit& Circuit::add(Gate gate) {
    check_gate(gate);
    ops_.emplace_back(std::move(gate));
    return *this;
}

Circuit& Circuit::measure(std::vector<std::size_t> qubits, std::vector<std::size_t> slots) {
    if (qubits.empty() || qubits.size() != slots.size()) {
        throw std::invalid_argument("measurement needs matching nonempty qubit and slot lists");
    }
    check_qubits(qubits);
    for (std::size_t s : slots) {
        if (s >= n_clbits_) {
            throw std::out_of_range("classical slot " + std::to_string(s) + " outside register width " +
                                    std::to_string(n_clbits_));
        }
    }
    for (std::size_t s : slots) {
        written_[s] = true;
    }
    ops_.emplace_back(MeasureOp{std::move(qubits), std::move(slots)});
    return *this;
}

Circuit& Circuit::measure_all() {
    if (n_clbits_ < n_qubits_) {
        throw std::invalid_argument("register narrower than circuit");
    }
    std::vector<std::size_t> q(n_qubits_);
    for (std::size_t i = 0; i < n_qubits_; ++i) {
        q[i] = i;
    }
    return measure(q, q);
}

Circuit& Circuit::conditional(std::size_t slot, int value, std::vector<Gate> gates) {
    if (slot >= n_clbits_) {
        throw std::out_of_range("classical slot " + std::to_string(slot) + " outside register width");
    }
    if (!written_[slot]) {
        throw std::invalid_argument("conditional reads slot c" + std::to_string(slot) + " before any measurement");
    }
    if (value != 0 && value != 1) {
        throw std::invalid_argument("conditional value must be 0 or 1");
    }
    for (const auto& g : gates) {
        check_gate(g);
    }
    ops_.emplace_back(ConditionalOp{slot, value, std::move(gates)});
    return *this;
}

Circuit& Circuit::channel(ChannelOp op) {
    check_qubits(op.qubits);
    if (op.channel.dim_in() != dim_for_qubits(op.qubits.size())) {
        throw std::invalid_argument("channel dimension does not match its qubit list");
    }
    ops_.emplace_back(std::move(op));
    return *this;
}

Circuit& Circuit::append(const CircuitOp& op) {
    std::visit(
        [this](const auto& o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, Gate>) {
                add(o);
            } else if constexpr (std::is_same_v<T, MeasureOp>) {
                measure(o.qubits, o.slots);
            } else if constexpr (std::is_same_v<T, ConditionalOp>) {
                conditional(o.slot, o.value, o.gates);
            } else {
                channel(o);
            }
        },
        op);
    return *this;
}

Circuit& Circuit::extend(const Circuit& other) {
    if (other.n_qubits_ != n_qubits_ || other.n_clbits_ > n_clbits_) {
        throw std::invalid_argument("cannot extend circuit with different widths");
    }
    for (const auto& op : other.ops_) {
        append(op);
    }
    return *this;
}

std::size_t Circuit::count_gates(GateKind kind) const {
    std::size_t count = 0;
    for (const auto& op : ops_) {
        if (const auto* g = std::get_if<Gate>(&op); g && g->kind == kind) {
            ++count;
        }
    }
    return count;
}

std::size_t Circuit::count_two_qubit_gates() const {
    std::size_t count = 0;
    for (const auto& op : ops_) {
        if (const auto* g = std::get_if<Gate>(&op); g && gate_arity(g->kind) == 2) {
            ++count;
        }
    }
    return count;
}

}  // namespace qpufsim
