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
#include <stdexcept>

#include "qpufsim/circuit.hpp"

namespace qpufsim {

std::size_t gate_arity(GateKind kind) {
    switch (kind) {
        case GateKind::CX:
        case GateKind::CZ:
        case GateKind::SWAP:
            return 2;
        default:
            return 1;
    }
}

bool gate_has_angle(GateKind kind) {
    return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
}

std::string gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::H:
            return "H";
        case GateKind::X:
            return "X";
        case GateKind::Y:
            return "Y";
        case GateKind::Z:
            return "Z";
        case GateKind::S:
            return "S";
        case GateKind::RX:
            return "RX";
        case GateKind::RY:
            return "RY";
        case GateKind::RZ:
            return "RZ";
        case GateKind::CX:
            return "CX";
        case GateKind::CZ:
            return "CZ";
        case GateKind::SWAP:
            return "SWAP";
    }
    return "?";
}

GateKind gate_kind_from_name(const std::string& name) {
    std::string upper = name;
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    static const GateKind kinds[] = {GateKind::H,  GateKind::X,  GateKind::Y,  GateKind::Z,  GateKind::S,   GateKind::RX,
                                     GateKind::RY, GateKind::RZ, GateKind::CX, GateKind::CZ, GateKind::SWAP};
    for (GateKind k : kinds) {
        if (gate_name(k) == upper) {
            return k;
        }
    }
    if (upper == "CNOT") {
        return GateKind::CX;
    }
    throw std::invalid_argument("unknown gate '" + name + "'");
}

ComplexMatrix gate_matrix(const Gate& gate) {
    const double c = std::cos(gate.theta / 2.0);
    const double s = std::sin(gate.theta / 2.0);
    ComplexMatrix m;
    switch (gate.kind) {
        case GateKind::H:
            m = ComplexMatrix(2, 2);
            m << 1, 1, 1, -1;
            return m / std::sqrt(2.0);
        case GateKind::X:
            return pauli_matrix(Pauli::X);
        case GateKind::Y:
            return pauli_matrix(Pauli::Y);
        case GateKind::Z:
            return pauli_matrix(Pauli::Z);
        case GateKind::S:
            m = ComplexMatrix(2, 2);
            m << 1, 0, 0, kI;
            return m;
        case GateKind::RX:
            m = ComplexMatrix(2, 2);
            m << c, -kI * s, -kI * s, c;
            return m;
        case GateKind::RY:
            m = ComplexMatrix(2, 2);
            m << c, -s, s, c;
            return m;
        case GateKind::RZ:
            m = ComplexMatrix(2, 2);
            m << std::exp(-kI * (gate.theta / 2.0)), 0, 0, std::exp(kI * (gate.theta / 2.0));
            return m;
        case GateKind::CX:
            m = ComplexMatrix::Zero(4, 4);
            m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
            return m;
        case GateKind::CZ:
            m = ComplexMatrix::Identity(4, 4);
            m(3, 3) = -1.0;
            return m;
        case GateKind::SWAP:
            m = ComplexMatrix::Zero(4, 4);
            m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
            return m;
    }
    throw std::logic_error("unhandled gate kind");
}

}  // namespace qpufsim
