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
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qpufsim/channel.hpp"
#include "qpufsim/linalg.hpp"

namespace qpufsim {

enum class GateKind { H, X, Y, Z, S, RX, RY, RZ, CX, CZ, SWAP };

std::size_t gate_arity(GateKind kind);
bool gate_has_angle(GateKind kind);
std::string gate_name(GateKind kind);
/// Case-insensitive; throws std::invalid_argument on unknown names.
GateKind gate_kind_from_name(const std::string& name);

/// Rotations follow R_a(theta) = exp(-i theta A / 2); S = diag(1, i).
/// For CX the first qubit is the control.
struct Gate {
    GateKind kind = GateKind::H;
    std::vector<std::size_t> qubits;
    double theta = 0.0;

    static Gate h(std::size_t q) { return {GateKind::H, {q}, 0.0}; }
    static Gate x(std::size_t q) { return {GateKind::X, {q}, 0.0}; }
    static Gate y(std::size_t q) { return {GateKind::Y, {q}, 0.0}; }
    static Gate z(std::size_t q) { return {GateKind::Z, {q}, 0.0}; }
    static Gate s(std::size_t q) { return {GateKind::S, {q}, 0.0}; }
    static Gate rx(std::size_t q, double t) { return {GateKind::RX, {q}, t}; }
    static Gate ry(std::size_t q, double t) { return {GateKind::RY, {q}, t}; }
    static Gate rz(std::size_t q, double t) { return {GateKind::RZ, {q}, t}; }
    static Gate cx(std::size_t c, std::size_t t) { return {GateKind::CX, {c, t}, 0.0}; }
    static Gate cz(std::size_t a, std::size_t b) { return {GateKind::CZ, {a, b}, 0.0}; }
    static Gate swap(std::size_t a, std::size_t b) { return {GateKind::SWAP, {a, b}, 0.0}; }

    bool operator==(const Gate&) const = default;
};

/// Local unitary of the gate on its own qubits (first listed qubit most significant).
ComplexMatrix gate_matrix(const Gate& gate);

/// Computational-basis measurement of `qubits`, outcome of qubits[i] written to slots[i].
struct MeasureOp {
    std::vector<std::size_t> qubits;
    std::vector<std::size_t> slots;
    bool operator==(const MeasureOp&) const = default;
};

/// Gates applied when classical slot `slot` holds `value`.
struct ConditionalOp {
    std::size_t slot = 0;
    int value = 1;
    std::vector<Gate> gates;
    bool operator==(const ConditionalOp&) const = default;
};

/// Single-qubit noise families with a text form. Stack is AD(a) after PD(b) after DEP(c).
enum class NoiseKind { AmplitudeDamping, PhaseDamping, Depolarizing, Stack, Custom };

struct ChannelOp {
    NoiseKind kind = NoiseKind::Custom;
    std::vector<double> params;
    std::vector<std::size_t> qubits;
    KrausChannel channel = KrausChannel::identity(2);

    static ChannelOp from_spec(NoiseKind kind, std::vector<double> params, std::size_t qubit);
    static ChannelOp custom(KrausChannel channel, std::vector<std::size_t> qubits);
};

KrausChannel noise_channel(NoiseKind kind, const std::vector<double>& params);

using CircuitOp = std::variant<Gate, MeasureOp, ConditionalOp, ChannelOp>;

/// Append-only op list on a fixed quantum and classical width. Every append is
/// validated: indices in range, distinct gate qubits, and conditionals may only
/// read slots already written by an earlier measurement.
class Circuit {
  public:
    Circuit(std::size_t n_qubits, std::size_t n_clbits);

    std::size_t n_qubits() const { return n_qubits_; }
    std::size_t n_clbits() const { return n_clbits_; }
    const std::vector<CircuitOp>& ops() const { return ops_; }
    std::size_t size() const { return ops_.size(); }

    Circuit& add(Gate gate);
    Circuit& measure(std::vector<std::size_t> qubits, std::vector<std::size_t> slots);
    /// Measures every qubit q into slot q.
    Circuit& measure_all();
    Circuit& conditional(std::size_t slot, int value, std::vector<Gate> gates);
    Circuit& channel(ChannelOp op);
    Circuit& append(const CircuitOp& op);
    /// Appends all ops of `other`: same qubit count, classical register no wider.
    Circuit& extend(const Circuit& other);

    std::size_t count_gates(GateKind kind) const;
    std::size_t count_two_qubit_gates() const;
    bool has_slot_written(std::size_t slot) const { return slot < written_.size() && written_[slot]; }

  private:
    void check_qubits(const std::vector<std::size_t>& qubits) const;
    void check_gate(const Gate& gate) const;

    std::size_t n_qubits_;
    std::size_t n_clbits_;
    std::vector<CircuitOp> ops_;
    std::vector<bool> written_;
};

/// Undirected coupling graph; validated connected with no self-loops.
class Topology {
  public:
    static Topology from_edges(std::size_t n_physical, std::vector<std::pair<std::size_t, std::size_t>> edges);
    static Topology path(std::size_t n);
    /// Star centered on qubit 0.
    static Topology star(std::size_t n);
    static Topology full(std::size_t n);
    /// 15-qubit ladder: rows 0..6 and 7..13 with rungs (i, i+7), qubit 14 attached to 13.
    static Topology melbourne();

    std::size_t n_physical() const { return n_; }
    const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
    bool adjacent(std::size_t a, std::size_t b) const;
    std::size_t degree(std::size_t q) const;
    /// BFS shortest path from a to b inclusive; ties go to the lower-index neighbour.
    std::vector<std::size_t> shortest_path(std::size_t a, std::size_t b) const;
    /// Subgraph on physical qubits 0..k-1; throws if it is disconnected.
    Topology induced(std::size_t k) const;

  private:
    Topology(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges);
    std::size_t n_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
    std::vector<std::vector<std::size_t>> adj_;
};

struct RoutedCircuit {
    Circuit circuit;
    /// final_layout[logical] = physical qubit holding that logical qubit at the end.
    std::vector<std::size_t> final_layout;
    std::size_t swaps = 0;
};

/// Greedy shortest-path routing. `layout[logical]` gives the initial physical
/// qubit. Each inserted SWAP is emitted as three CX gates.
RoutedCircuit route(const Circuit& circuit, const Topology& topology, std::vector<std::size_t> layout);

/// Line-oriented text form; see docs/circuit_format.md.
std::string to_text(const Circuit& circuit);
Circuit parse_circuit(const std::string& text);

}  // namespace qpufsim
