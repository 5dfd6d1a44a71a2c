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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qpufsim/harness.hpp"
#include "qpufsim/random.hpp"

namespace qpufsim {

namespace fs = std::filesystem;

namespace {

std::string hex64(std::uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot read " + path);
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

template <typename T>
T parse_number(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        T v;
        if constexpr (std::is_same_v<T, double>) {
            v = std::stod(s, &used);
        } else {
            v = static_cast<T>(std::stoull(s, &used));
        }
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("bad ") + what + " '" + s + "'");
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    if (schema_version != kConfigSchemaVersion) {
        throw std::invalid_argument("unsupported config schema_version " + std::to_string(schema_version));
    }
    if (archs.empty() || n_qubits.empty()) {
        throw std::invalid_argument("config needs at least one architecture and one register size");
    }
    if (n_instances < 2) {
        throw std::invalid_argument("uniqueness needs n_instances >= 2");
    }
    if (n_challenges < 1 || shots < 1 || repeats < 1) {
        throw std::invalid_argument("n_challenges, shots and repeats must be >= 1");
    }
    if (!(rate_jitter >= 0.0 && rate_jitter < 1.0)) {
        throw std::invalid_argument("rate_jitter must lie in [0, 1)");
    }
    for (std::size_t n : n_qubits) {
        if (n < 2) {
            throw std::invalid_argument("register sizes must be >= 2");
        }
        if (n > kDensityMatrixMaxQubits) {
            throw GuardError("density-matrix mode is limited to " + std::to_string(kDensityMatrixMaxQubits) +
                             " qubits; n=" + std::to_string(n) + " would need a 2^" + std::to_string(2 * n) +
                             "-entry state");
        }
    }
}

ExperimentConfig config_from_json(const std::string& text) {
    ExperimentConfig c;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw std::invalid_argument("config must be a JSON object");
    }
    static const std::set<std::string> known = {
        "schema_version", "arch",  "archs", "n_qubits",      "n_instances",   "n_challenges",    "shots",
        "repeats",        "master_seed", "profile", "m", "f", "tau", "trotter_order", "trotter_r", "rate_jitter",
        "quantum_metrics", "output_dir"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
    try {
        if (!j.contains("schema_version")) {
            throw std::invalid_argument("config lacks schema_version");
        }
        c.schema_version = j["schema_version"].get<int>();
        if (j.contains("arch")) c.archs = {parse_arch(j["arch"].get<std::string>())};
        if (j.contains("archs")) {
            c.archs.clear();
            for (const auto& a : j["archs"]) c.archs.push_back(parse_arch(a.get<std::string>()));
        }
        if (j.contains("n_qubits")) {
            const auto& n = j["n_qubits"];
            c.n_qubits = n.is_array() ? n.get<std::vector<std::size_t>>() : std::vector<std::size_t>{n.get<std::size_t>()};
        }
        c.n_instances = j.value("n_instances", c.n_instances);
        c.n_challenges = j.value("n_challenges", c.n_challenges);
        c.shots = j.value("shots", c.shots);
        c.repeats = j.value("repeats", c.repeats);
        c.master_seed = j.value("master_seed", c.master_seed);
        c.profile = j.value("profile", c.profile);
        c.gen.m = j.value("m", c.gen.m);
        c.gen.f = j.value("f", c.gen.f);
        c.gen.tau = j.value("tau", c.gen.tau);
        c.gen.trotter_order = j.value("trotter_order", c.gen.trotter_order);
        c.gen.trotter_r = j.value("trotter_r", c.gen.trotter_r);
        c.rate_jitter = j.value("rate_jitter", c.rate_jitter);
        c.quantum_metrics = j.value("quantum_metrics", c.quantum_metrics);
        c.output_dir = j.value("output_dir", c.output_dir);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad config value: ") + e.what());
    }
    return c;
}

std::string config_to_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["schema_version"] = c.schema_version;
    std::vector<std::string> archs;
    for (Arch a : c.archs) archs.push_back(arch_name(a));
    j["archs"] = archs;
    j["n_qubits"] = c.n_qubits;
    j["n_instances"] = c.n_instances;
    j["n_challenges"] = c.n_challenges;
    j["shots"] = c.shots;
    j["repeats"] = c.repeats;
    j["master_seed"] = c.master_seed;
    j["profile"] = c.profile;
    j["m"] = c.gen.m;
    j["f"] = c.gen.f;
    j["tau"] = c.gen.tau;
    j["trotter_order"] = c.gen.trotter_order;
    j["trotter_r"] = c.gen.trotter_r;
    j["rate_jitter"] = c.rate_jitter;
    j["quantum_metrics"] = c.quantum_metrics;
    j["output_dir"] = c.output_dir;
    return j.dump(2);
}

std::string config_digest(const ExperimentConfig& config) {
    ExperimentConfig c = config;
    c.output_dir.clear();
    return hex64(hash64(0, "config", config_to_json(c)));
}

std::uint64_t histogram_digest(const Histogram& histogram) {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (const auto& [bits, count] : histogram) h = hash64(h ^ count, "hist", bits);
    return h;
}

std::vector<std::string> all_challenges(std::size_t n) {
    const std::size_t d = dim_for_qubits(n);
    std::vector<std::string> out;
    out.reserve(d);
    for (std::size_t i = 0; i < d; ++i) out.push_back(index_to_bits(i, n));
    return out;
}

std::vector<std::string> sample_challenges(std::size_t n, std::size_t count, std::uint64_t seed) {
    const std::uint64_t space = dim_for_qubits(n);
    Rng rng(seed);
    std::vector<std::string> out;
    out.reserve(count);
    if (count <= space) {
        std::set<std::uint64_t> seen;
        while (out.size() < count) {
            const std::uint64_t x = rng.below(space);
            if (seen.insert(x).second) out.push_back(index_to_bits(x, n));
        }
    } else {
        for (std::size_t k = 0; k < count; ++k) out.push_back(index_to_bits(rng.below(space), n));
    }
    return out;
}

std::uint64_t shot_seed(std::uint64_t instance_seed, const std::string& challenge, std::size_t round) {
    return hash64(instance_seed, challenge, round);
}

std::string crps_to_csv(const std::vector<CrpRecord>& records) {
    std::ostringstream os;
    os << kCrpCsvHeader << '\n';
    for (const auto& r : records) {
        os << r.arch << ',' << r.n_qubits << ',' << r.instance << ',' << r.device_id << ',' << r.challenge_index << ','
           << r.challenge << ',' << r.round << ',' << r.response << ',' << r.shots << ',' << hex64(r.histogram_digest)
           << ',' << r.seed << '\n';
    }
    return os.str();
}

std::vector<CrpRecord> crps_from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != kCrpCsvHeader) {
        throw std::invalid_argument("CRP archive has an unexpected header");
    }
    std::vector<CrpRecord> out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 11) {
            throw std::invalid_argument("CRP archive line " + std::to_string(lineno) + ": expected 11 fields");
        }
        CrpRecord r;
        r.arch = f[0];
        r.n_qubits = parse_number<std::size_t>(f[1], "n_qubits");
        r.instance = parse_number<std::size_t>(f[2], "instance");
        r.device_id = f[3];
        r.challenge_index = parse_number<std::size_t>(f[4], "challenge_index");
        r.challenge = f[5];
        r.round = parse_number<std::size_t>(f[6], "round");
        r.response = f[7];
        r.shots = parse_number<std::uint64_t>(f[8], "shots");
        r.histogram_digest = std::stoull(f[9], nullptr, 16);
        r.seed = parse_number<std::uint64_t>(f[10], "seed");
        if (r.response.size() != r.n_qubits || r.challenge.size() != r.n_qubits) {
            throw std::invalid_argument("CRP archive line " + std::to_string(lineno) + ": bit length mismatch");
        }
        out.push_back(std::move(r));
    }
    return out;
}

void classical_metrics_from_crps(const std::vector<CrpRecord>& group, MetricsReport& report) {
    // instance -> challenge -> round -> response
    std::map<std::size_t, std::map<std::size_t, std::map<std::size_t, std::string>>> table;
    for (const auto& r : group) table[r.instance][r.challenge_index][r.round] = r.response;
    if (table.empty()) {
        throw std::invalid_argument("no CRP records for this group");
    }
    std::vector<std::vector<std::string>> devices;
    std::vector<std::string> golden_all;
    std::map<std::size_t, std::vector<std::string>> rounds_all;
    for (const auto& [inst, challenges] : table) {
        std::vector<std::string> golden;
        for (const auto& [c, rounds] : challenges) {
            const auto g = rounds.find(0);
            if (g == rounds.end()) {
                throw std::invalid_argument("CRP group lacks a golden response");
            }
            golden.push_back(g->second);
            golden_all.push_back(g->second);
            for (const auto& [round, resp] : rounds) {
                if (round > 0) rounds_all[round].push_back(resp);
            }
        }
        devices.push_back(std::move(golden));
    }
    report.uniformity_pct = uniformity_classical(golden_all);
    report.uniqueness_pct = devices.size() >= 2 ? uniqueness_classical(devices) : 0.0;
    std::vector<std::vector<std::string>> rounds;
    for (auto& [round, list] : rounds_all) rounds.push_back(std::move(list));
    report.reliability_pct = rounds.empty() ? 100.0 : reliability_classical(golden_all, rounds);
}

std::optional<BackendProfile> resolve_profile(const std::string& spec) {
    if (spec.empty() || spec == "ideal") return std::nullopt;
    if (spec == "athens" || spec == "santiago" || spec == "melbourne") return builtin_profile(spec);
    if (fs::exists(spec)) return profile_from_json(read_file(spec));
    throw std::invalid_argument("unknown profile '" + spec + "' (ideal, athens, santiago, melbourne or a JSON file)");
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::ostream* progress) {
    config.validate();
    const auto profile = resolve_profile(config.profile);
    if (profile) {
        for (std::size_t n : config.n_qubits) {
            if (n > profile->n_qubits()) {
                throw GuardError("profile " + profile->name + " has " + std::to_string(profile->n_qubits()) +
                                 " qubits; n=" + std::to_string(n) + " requested");
            }
        }
    }
    const BackendProfile* prof = profile ? &*profile : nullptr;
    const std::string digest = config_digest(config);
    ExperimentResult result;

    for (Arch arch : config.archs) {
        for (std::size_t n : config.n_qubits) {
            const auto challenges = sample_challenges(n, config.n_challenges, hash64(config.master_seed, "chal", n));
            MetricsReport rep;
            rep.arch = arch_name(arch);
            rep.n_qubits = n;
            rep.profile = profile ? profile->name : "ideal";
            rep.instances = config.n_instances;
            rep.challenges = config.n_challenges;
            rep.shots = config.shots;
            rep.repeats = config.repeats;
            rep.seed = config.master_seed;
            rep.config_digest = digest;

            double unif_q = 0.0, uniq_q = 0.0, rel_q = 0.0;
            std::size_t unif_n = 0, uniq_n = 0, rel_n = 0;
            std::vector<DensityMatrix> prev_states;
            std::vector<CrpRecord> group;

            for (std::size_t i = 0; i < config.n_instances; ++i) {
                const QpufInstance inst = qgen(arch, n, config.master_seed, i, config.gen);
                std::vector<DensityMatrix> states;
                for (std::size_t c = 0; c < challenges.size(); ++c) {
                    const std::string& ch = challenges[c];
                    const ExactOutput out = evaluate_exact(inst, ch, prof);
                    for (std::size_t r = 0; r <= config.repeats; ++r) {
                        const std::map<std::string, double>* dist = &out.distribution;
                        ExactOutput drifted;
                        if (config.rate_jitter > 0.0 && r > 0) {
                            drifted = evaluate_exact(
                                jitter_rates(inst, config.rate_jitter, hash64(inst.seed, "jitter", ch, r)), ch, prof);
                            dist = &drifted.distribution;
                            if (config.quantum_metrics) {
                                rel_q += trace_distance(out.state, drifted.state);
                                ++rel_n;
                            }
                        }
                        const std::uint64_t seed = shot_seed(inst.seed, ch, r);
                        const Response resp = sample_response(*dist, n, config.shots, seed);
                        group.push_back({rep.arch, n, i, inst.device_id, c, ch, r, resp.bits, resp.shots,
                                         histogram_digest(resp.histogram), seed});
                    }
                    if (config.quantum_metrics) {
                        unif_q += distance_from_uniform(out.state);
                        ++unif_n;
                        states.push_back(out.state);
                    }
                }
                if (config.quantum_metrics && !prev_states.empty()) {
                    for (std::size_t c = 0; c < states.size(); ++c) {
                        uniq_q += trace_norm_distance(prev_states[c], states[c]);
                        ++uniq_n;
                    }
                }
                prev_states = std::move(states);
            }
            classical_metrics_from_crps(group, rep);
            if (config.quantum_metrics) {
                rep.uniformity_q = unif_q / static_cast<double>(unif_n);
                rep.uniqueness_q = uniq_n ? uniq_q / static_cast<double>(uniq_n) : 0.0;
                rep.reliability_q = rel_n ? 1.0 - rel_q / static_cast<double>(rel_n) : 1.0;
            }
            if (progress) {
                *progress << rep.arch << " n=" << n << " profile=" << rep.profile << " uniformity=" << rep.uniformity_pct
                          << " uniqueness=" << rep.uniqueness_pct << " reliability=" << rep.reliability_pct << '\n';
            }
            result.reports.push_back(rep);
            result.crps.insert(result.crps.end(), group.begin(), group.end());
        }
    }
    return result;
}

void write_experiment(const ExperimentResult& result, const ExperimentConfig& config, const std::string& dir) {
    fs::create_directories(dir);
    write_file(fs::path(dir) / "metrics.csv", reports_to_csv(result.reports));
    write_file(fs::path(dir) / "metrics.json", reports_to_json(result.reports));
    write_file(fs::path(dir) / "crps.csv", crps_to_csv(result.crps));
    write_file(fs::path(dir) / "config.json", config_to_json(config));
}

std::vector<MetricsReport> recompute_metrics(const std::string& dir) {
    const fs::path base(dir);
    if (!fs::is_directory(base)) {
        throw std::invalid_argument("archive directory " + dir + " does not exist");
    }
    auto reports = reports_from_json(read_file((base / "metrics.json").string()));
    const auto crps = crps_from_csv(read_file((base / "crps.csv").string()));
    for (auto& rep : reports) {
        std::vector<CrpRecord> group;
        for (const auto& r : crps) {
            if (r.arch == rep.arch && r.n_qubits == rep.n_qubits) group.push_back(r);
        }
        classical_metrics_from_crps(group, rep);
    }
    return reports;
}

std::vector<std::string> emit_plot_data(const std::string& archive_dir, const std::string& out_dir) {
    const fs::path base(archive_dir);
    const fs::path metrics = base / "metrics.json";
    if (!fs::exists(metrics)) {
        throw std::invalid_argument("no metrics.json in archive " + archive_dir);
    }
    auto reports = reports_from_json(read_file(metrics.string()));
    std::sort(reports.begin(), reports.end(), [](const MetricsReport& a, const MetricsReport& b) {
        return std::tie(a.arch, a.profile, a.n_qubits) < std::tie(b.arch, b.profile, b.n_qubits);
    });
    fs::create_directories(out_dir);
    std::vector<std::string> written;
    const std::pair<const char*, double MetricsReport::*> metrics_list[] = {
        {"uniformity", &MetricsReport::uniformity_pct},     {"uniqueness", &MetricsReport::uniqueness_pct},
        {"reliability", &MetricsReport::reliability_pct},   {"uniformity_quantum", &MetricsReport::uniformity_q},
        {"uniqueness_quantum", &MetricsReport::uniqueness_q}, {"reliability_quantum", &MetricsReport::reliability_q}};
    for (const auto& [name, member] : metrics_list) {
        std::ostringstream os;
        os << "arch,profile,n_qubits,value\n";
        for (const auto& r : reports) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", r.*member);
            os << r.arch << ',' << r.profile << ',' << r.n_qubits << ',' << buf << '\n';
        }
        const fs::path p = fs::path(out_dir) / (std::string("series_") + name + ".csv");
        write_file(p, os.str());
        written.push_back(p.string());
    }
    constexpr int kBins = 10;
    for (const auto& prof : builtin_profiles()) {
        const DeviceStats st = device_stats(prof.name);
        const std::tuple<const char*, CalibrationStats, double QubitCalibration::*, double> params[] = {
            {"t1_us", st.t1, &QubitCalibration::t1_us, 1.0},
            {"t2_us", st.t2, &QubitCalibration::t2_us, 1.0},
            {"readout_pct", st.readout_pct, &QubitCalibration::readout_error, 100.0}};
        for (const auto& [pname, stats, member, scale] : params) {
            std::vector<int> counts(kBins, 0);
            const double width = (stats.max - stats.min) / kBins;
            for (const auto& q : prof.qubits) {
                const double v = q.*member * scale;
                const int b = std::clamp(static_cast<int>((v - stats.min) / width), 0, kBins - 1);
                ++counts[static_cast<std::size_t>(b)];
            }
            std::ostringstream os;
            os << "bin_lo,bin_hi,count\n";
            for (int b = 0; b < kBins; ++b) {
                char buf[96];
                const double hi = b == kBins - 1 ? stats.max : stats.min + (b + 1) * width;
                std::snprintf(buf, sizeof buf, "%.6g,%.6g,%d\n", stats.min + b * width, hi, counts[static_cast<std::size_t>(b)]);
                os << buf;
            }
            const fs::path p = fs::path(out_dir) / ("hist_" + prof.name + "_" + pname + ".csv");
            write_file(p, os.str());
            written.push_back(p.string());
        }
    }
    return written;
}

}  // namespace qpufsim
