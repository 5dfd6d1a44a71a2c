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

#include "qpufsim/metrics.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qpufsim/linalg.hpp"

namespace qpufsim {

namespace {

void check_same_dim(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("states have different dimensions");
    }
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

double distance_from_uniform(const DensityMatrix& rho) {
    ComplexMatrix diff = rho.matrix();
    diff.diagonal().array() -= 1.0 / static_cast<double>(rho.dim());
    return trace_norm(diff);
}

double trace_norm_distance(const DensityMatrix& a, const DensityMatrix& b) {
    check_same_dim(a, b);
    return trace_norm(ComplexMatrix(a.matrix() - b.matrix()));
}

double uniformity_quantum(const std::vector<DensityMatrix>& outputs) {
    if (outputs.empty()) {
        throw std::invalid_argument("uniformity needs at least one output");
    }
    double sum = 0.0;
    for (const auto& rho : outputs) {
        check_same_dim(rho, outputs.front());
        sum += distance_from_uniform(rho);
    }
    return sum / static_cast<double>(outputs.size());
}

double uniqueness_quantum(const std::vector<DensityMatrix>& a, const std::vector<DensityMatrix>& b) {
    if (a.empty() || a.size() != b.size()) {
        throw std::invalid_argument("uniqueness needs equal, nonempty output lists");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        sum += trace_norm_distance(a[k], b[k]);
    }
    return sum / static_cast<double>(a.size());
}

double reliability_quantum(const std::vector<std::vector<DensityMatrix>>& rounds) {
    if (rounds.size() < 2) {
        throw std::invalid_argument("reliability needs at least two rounds");
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t r = 0; r < rounds.size(); ++r) {
        if (rounds[r].size() != rounds[0].size() || rounds[r].empty()) {
            throw std::invalid_argument("rounds must be aligned and nonempty");
        }
        for (std::size_t s = r + 1; s < rounds.size(); ++s) {
            for (std::size_t k = 0; k < rounds[r].size(); ++k) {
                sum += trace_distance(rounds[r][k], rounds[s][k]);
                ++count;
            }
        }
    }
    return 1.0 - sum / static_cast<double>(count);
}

double hamming_fraction(const std::string& a, const std::string& b) {
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument("responses must have equal nonzero length");
    }
    std::size_t diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i) diff += a[i] != b[i];
    return static_cast<double>(diff) / static_cast<double>(a.size());
}

double uniformity_classical(const std::vector<std::string>& responses) {
    std::size_t ones = 0, total = 0;
    for (const auto& r : responses) {
        for (char c : r) {
            if (c != '0' && c != '1') throw std::invalid_argument("response must be a bit string");
            ones += c == '1';
        }
        total += r.size();
    }
    if (total == 0) {
        throw std::invalid_argument("uniformity needs at least one response bit");
    }
    return 100.0 * static_cast<double>(ones) / static_cast<double>(total);
}

double uniqueness_classical(const std::vector<std::vector<std::string>>& devices) {
    if (devices.size() < 2) {
        throw std::invalid_argument("uniqueness needs at least two devices");
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < devices.size(); ++i) {
        for (std::size_t j = i + 1; j < devices.size(); ++j) {
            if (devices[i].size() != devices[j].size() || devices[i].empty()) {
                throw std::invalid_argument("device response lists must be aligned and nonempty");
            }
            for (std::size_t k = 0; k < devices[i].size(); ++k) {
                sum += hamming_fraction(devices[i][k], devices[j][k]);
                ++count;
            }
        }
    }
    return 100.0 * sum / static_cast<double>(count);
}

double reliability_classical(const std::vector<std::string>& golden, const std::vector<std::vector<std::string>>& rounds) {
    if (golden.empty() || rounds.empty()) {
        throw std::invalid_argument("reliability needs golden responses and at least one round");
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& round : rounds) {
        if (round.size() != golden.size()) {
            throw std::invalid_argument("round is not aligned with the golden responses");
        }
        for (std::size_t k = 0; k < golden.size(); ++k) {
            sum += 1.0 - hamming_fraction(golden[k], round[k]);
            ++count;
        }
    }
    return 100.0 * sum / static_cast<double>(count);
}

std::string reports_to_csv(const std::vector<MetricsReport>& reports) {
    std::ostringstream os;
    os << kMetricsCsvHeader << '\n';
    for (const auto& r : reports) {
        const std::pair<const char*, double> rows[] = {
            {"uniformity", r.uniformity_pct},     {"uniqueness", r.uniqueness_pct},
            {"reliability", r.reliability_pct},   {"uniformity_quantum", r.uniformity_q},
            {"uniqueness_quantum", r.uniqueness_q}, {"reliability_quantum", r.reliability_q}};
        for (const auto& [name, value] : rows) {
            os << r.arch << ',' << r.n_qubits << ',' << name << ',' << fmt(value) << ',' << r.instances << ','
               << r.challenges << ',' << r.shots << ',' << r.repeats << ',' << r.seed << '\n';
        }
    }
    return os.str();
}

std::string reports_to_json(const std::vector<MetricsReport>& reports) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        arr.push_back({{"arch", r.arch},
                       {"n_qubits", r.n_qubits},
                       {"profile", r.profile},
                       {"uniformity_pct", r.uniformity_pct},
                       {"uniqueness_pct", r.uniqueness_pct},
                       {"reliability_pct", r.reliability_pct},
                       {"uniformity_quantum", r.uniformity_q},
                       {"uniqueness_quantum", r.uniqueness_q},
                       {"reliability_quantum", r.reliability_q},
                       {"instances", r.instances},
                       {"challenges", r.challenges},
                       {"shots", r.shots},
                       {"repeats", r.repeats},
                       {"seed", r.seed},
                       {"config_digest", r.config_digest}});
    }
    return arr.dump(2);
}

std::vector<MetricsReport> reports_from_json(const std::string& text) {
    std::vector<MetricsReport> out;
    try {
        for (const auto& j : nlohmann::json::parse(text)) {
            MetricsReport r;
            r.arch = j.at("arch").get<std::string>();
            r.n_qubits = j.at("n_qubits").get<std::size_t>();
            r.profile = j.value("profile", std::string("ideal"));
            r.uniformity_pct = j.at("uniformity_pct").get<double>();
            r.uniqueness_pct = j.at("uniqueness_pct").get<double>();
            r.reliability_pct = j.at("reliability_pct").get<double>();
            r.uniformity_q = j.at("uniformity_quantum").get<double>();
            r.uniqueness_q = j.at("uniqueness_quantum").get<double>();
            r.reliability_q = j.at("reliability_quantum").get<double>();
            r.instances = j.at("instances").get<std::size_t>();
            r.challenges = j.at("challenges").get<std::size_t>();
            r.shots = j.at("shots").get<std::uint64_t>();
            r.repeats = j.at("repeats").get<std::size_t>();
            r.seed = j.at("seed").get<std::uint64_t>();
            r.config_digest = j.value("config_digest", std::string());
            out.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad report JSON: ") + e.what());
    }
    return out;
}

}  // namespace qpufsim
