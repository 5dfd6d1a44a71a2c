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
#include <optional>
#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "qpufsim/circuit.hpp"

namespace qpufsim {

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string qubit_list(const std::vector<std::size_t>& qs) {
    std::string s;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        s += (i ? " q" : "q") + std::to_string(qs[i]);
    }
    return s;
}

std::string gate_text(const Gate& g) {
    std::string s = gate_name(g.kind) + " " + qubit_list(g.qubits);
    if (gate_has_angle(g.kind)) {
        s += " " + fmt_double(g.theta);
    }
    return s;
}

const char* noise_name(NoiseKind k) {
    switch (k) {
        case NoiseKind::AmplitudeDamping:
            return "AD";
        case NoiseKind::PhaseDamping:
            return "PD";
        case NoiseKind::Depolarizing:
            return "DEP";
        case NoiseKind::Stack:
            return "STACK";
        case NoiseKind::Custom:
            break;
    }
    return nullptr;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) {
        out.push_back(tok);
    }
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

class LineError : public std::invalid_argument {
  public:
    LineError(std::size_t line, const std::string& msg)
        : std::invalid_argument("line " + std::to_string(line) + ": " + msg) {}
};

std::size_t parse_index(const std::string& tok, char prefix, std::size_t line) {
    if (tok.size() < 2 || std::tolower(static_cast<unsigned char>(tok[0])) != prefix) {
        throw LineError(line, "expected " + std::string(1, prefix) + "<index>, got '" + tok + "'");
    }
    std::size_t v = 0;
    const auto res = std::from_chars(tok.data() + 1, tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw LineError(line, "bad index '" + tok + "'");
    }
    return v;
}

double parse_real(const std::string& tok, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) {
            throw std::invalid_argument(tok);
        }
        return v;
    } catch (const std::exception&) {
        throw LineError(line, "bad number '" + tok + "'");
    }
}

Gate parse_gate(const std::vector<std::string>& toks, std::size_t line) {
    if (toks.empty()) {
        throw LineError(line, "empty gate");
    }
    Gate g;
    try {
        g.kind = gate_kind_from_name(toks[0]);
    } catch (const std::invalid_argument& e) {
        throw LineError(line, e.what());
    }
    const std::size_t arity = gate_arity(g.kind);
    const std::size_t expected = 1 + arity + (gate_has_angle(g.kind) ? 1 : 0);
    if (toks.size() != expected) {
        throw LineError(line, toks[0] + " expects " + std::to_string(expected - 1) + " argument(s)");
    }
    for (std::size_t i = 0; i < arity; ++i) {
        g.qubits.push_back(parse_index(toks[1 + i], 'q', line));
    }
    if (gate_has_angle(g.kind)) {
        g.theta = parse_real(toks.back(), line);
    }
    return g;
}

}  // namespace

std::string to_text(const Circuit& circuit) {
    std::string out = "QUBITS " + std::to_string(circuit.n_qubits()) + "\nCLBITS " +
                      std::to_string(circuit.n_clbits()) + "\n";
    for (const auto& op : circuit.ops()) {
        if (const auto* g = std::get_if<Gate>(&op)) {
            out += gate_text(*g);
        } else if (const auto* m = std::get_if<MeasureOp>(&op)) {
            out += "MEASURE " + qubit_list(m->qubits) + " ->";
            for (std::size_t s : m->slots) {
                out += " c" + std::to_string(s);
            }
        } else if (const auto* c = std::get_if<ConditionalOp>(&op)) {
            out += "COND c" + std::to_string(c->slot) + "==" + std::to_string(c->value) + ":";
            for (std::size_t i = 0; i < c->gates.size(); ++i) {
                out += (i ? "; " : " ") + gate_text(c->gates[i]);
            }
        } else if (const auto* ch = std::get_if<ChannelOp>(&op)) {
            const char* name = noise_name(ch->kind);
            if (!name) {
                throw std::invalid_argument("custom channels have no text form");
            }
            out += std::string("NOISE ") + name;
            for (double p : ch->params) {
                out += " " + fmt_double(p);
            }
            out += " " + qubit_list(ch->qubits);
        }
        out += "\n";
    }
    return out;
}

Circuit parse_circuit(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    std::optional<std::size_t> n_qubits;
    std::optional<std::size_t> n_clbits;
    std::optional<Circuit> circuit;
    auto require_circuit = [&](std::size_t line) -> Circuit& {
        if (!circuit) {
            if (!n_qubits) {
                throw LineError(line, "QUBITS header must precede operations");
            }
            circuit.emplace(*n_qubits, n_clbits.value_or(0));
        }
        return *circuit;
    };
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw.substr(0, raw.find('#'));
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto toks = split_ws(line);
        std::string head = toks[0];
        for (auto& ch : head) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        try {
            if (head == "QUBITS" || head == "CLBITS") {
                if (circuit || toks.size() != 2) {
                    throw LineError(line_no, head + " must appear once, before operations, with one value");
                }
                const std::size_t v = static_cast<std::size_t>(parse_real(toks[1], line_no));
                (head == "QUBITS" ? n_qubits : n_clbits) = v;
            } else if (head == "MEASURE") {
                const auto arrow = std::find(toks.begin(), toks.end(), "->");
                if (arrow == toks.end()) {
                    throw LineError(line_no, "MEASURE needs '->'");
                }
                std::vector<std::size_t> qs;
                std::vector<std::size_t> cs;
                for (auto it = toks.begin() + 1; it != arrow; ++it) qs.push_back(parse_index(*it, 'q', line_no));
                for (auto it = arrow + 1; it != toks.end(); ++it) cs.push_back(parse_index(*it, 'c', line_no));
                require_circuit(line_no).measure(qs, cs);
            } else if (head == "COND") {
                const std::size_t colon = line.find(':');
                if (colon == std::string::npos) {
                    throw LineError(line_no, "COND needs ':'");
                }
                const std::string pred = trim(line.substr(4, colon - 4));
                const std::size_t eq = pred.find("==");
                if (eq == std::string::npos) {
                    throw LineError(line_no, "COND predicate must be c<slot>==<0|1>");
                }
                const std::size_t slot = parse_index(trim(pred.substr(0, eq)), 'c', line_no);
                const int value = static_cast<int>(parse_real(trim(pred.substr(eq + 2)), line_no));
                std::vector<Gate> gates;
                std::istringstream body(line.substr(colon + 1));
                std::string part;
                while (std::getline(body, part, ';')) {
                    const auto gt = split_ws(part);
                    if (!gt.empty()) {
                        gates.push_back(parse_gate(gt, line_no));
                    }
                }
                require_circuit(line_no).conditional(slot, value, std::move(gates));
            } else if (head == "NOISE") {
                if (toks.size() < 3) {
                    throw LineError(line_no, "NOISE needs a kind, parameters and one qubit");
                }
                std::string kind = toks[1];
                for (auto& ch : kind) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
                NoiseKind nk;
                if (kind == "AD") nk = NoiseKind::AmplitudeDamping;
                else if (kind == "PD") nk = NoiseKind::PhaseDamping;
                else if (kind == "DEP") nk = NoiseKind::Depolarizing;
                else if (kind == "STACK") nk = NoiseKind::Stack;
                else throw LineError(line_no, "unknown noise kind '" + toks[1] + "'");
                std::vector<double> params;
                for (std::size_t i = 2; i + 1 < toks.size(); ++i) params.push_back(parse_real(toks[i], line_no));
                const std::size_t q = parse_index(toks.back(), 'q', line_no);
                require_circuit(line_no).channel(ChannelOp::from_spec(nk, std::move(params), q));
            } else {
                require_circuit(line_no).add(parse_gate(toks, line_no));
            }
        } catch (const LineError&) {
            throw;
        } catch (const std::exception& e) {
            throw LineError(line_no, e.what());
        }
    }
    return circuit ? std::move(*circuit) : Circuit(n_qubits.value_or(0), n_clbits.value_or(0));
}

}  // namespace qpufsim
