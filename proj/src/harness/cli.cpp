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

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qpufsim/harness.hpp"
#include "qpufsim/tomography.hpp"

namespace qpufsim {

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot read " + path);
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spill(const std::string& path, const std::string& text) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << text;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct Globals {
    std::uint64_t seed = 1;
    std::string profile = "ideal";
    std::string out;
    std::string config;
};

struct InstanceArgs {
    std::string arch;
    std::size_t n = 2;
    std::uint64_t index = 0;
    std::size_t m = GenOptions{}.m;
    std::size_t f = GenOptions{}.f;
    double tau = GenOptions{}.tau;
    std::size_t trotter_r = GenOptions{}.trotter_r;
    std::string instance_file;

    void attach(CLI::App* app) {
        app->add_option("--arch", arch, "Architecture: D, MF or L");
        app->add_option("--n", n, "Number of qubits");
        app->add_option("--index", index, "Device index under the master seed");
        app->add_option("--m", m, "Lindblad blocks (L)");
        app->add_option("--f", f, "Feedback rounds (MF)");
        app->add_option("--tau", tau, "Lindblad window time (L)");
        app->add_option("--trotter-r", trotter_r, "Trotter steps per window (L)");
        app->add_option("--instance", instance_file, "Instance JSON written by `gen`");
    }

    QpufInstance make(std::uint64_t seed) const {
        if (!instance_file.empty()) return instance_from_json(slurp(instance_file));
        if (arch.empty()) {
            throw std::invalid_argument("--arch or --instance is required");
        }
        GenOptions o;
        o.m = m;
        o.f = f;
        o.tau = tau;
        o.trotter_r = trotter_r;
        return qgen(parse_arch(arch), n, seed, index, o);
    }
};

std::string response_json(const QpufInstance& inst, const std::string& challenge, const Response& r,
                          const std::string& profile) {
    nlohmann::ordered_json j;
    j["device_id"] = inst.device_id;
    j["challenge"] = challenge;
    j["response"] = r.bits;
    j["shots"] = r.shots;
    j["profile"] = profile;
    nlohmann::ordered_json h = nlohmann::ordered_json::object();
    for (const auto& [bits, count] : r.histogram) h[bits] = count;
    j["histogram"] = h;
    return j.dump(2);
}

int cmd_tomography(const QpufInstance& base, std::size_t width, const std::string& challenge_arg,
                   std::uint64_t shots, bool exact, std::uint64_t seed, std::ostream& out) {
    if (width < 1 || width > kProcessTomographyMaxQubits) {
        throw GuardError("process tomography supports 1 or 2 qubits");
    }
    const std::size_t n = base.n_qubits;
    if (width > n) {
        throw std::invalid_argument("tomography width exceeds the instance width");
    }
    if (n > 4) {
        throw GuardError("tomography instances are limited to 4 qubits");
    }
    const std::string challenge = challenge_arg.empty() ? std::string(n, '0') : challenge_arg;
    validate_challenge(challenge, n);
    // Probe the first `width` qubits; the rest start in |0> and are traced out.
    const ChannelBox box = [&](const DensityMatrix& in) {
        DensityMatrix full = width == n ? in : tensor(in, DensityMatrix::zero_state(n - width));
        const DensityMatrix outp = apply_instance_channel(base, challenge, full);
        if (width == n) return outp;
        std::vector<std::size_t> keep(width);
        for (std::size_t q = 0; q < width; ++q) keep[q] = q;
        return partial_trace(outp, keep);
    };
    const ChoiMatrix truth = process_tomography(box, width, {0, 0, true});
    TomographyOptions opt{shots, seed, exact};
    const ProcessTomographyResult res = process_tomography_detailed(box, width, opt);
    const ComplexMatrix u = best_fit_unitary(res.projected);
    nlohmann::ordered_json j;
    j["device_id"] = base.device_id;
    j["challenge"] = challenge;
    j["width"] = width;
    j["shots_per_setting"] = exact ? 0 : shots;
    j["exact_statistics"] = exact;
    j["parameters_unitary"] = parameter_count(ChannelModel::Unitary, width);
    j["parameters_cptp"] = parameter_count(ChannelModel::Cptp, width);
    j["samples_unitary_eps0.1"] = sample_complexity(static_cast<double>(parameter_count(ChannelModel::Unitary, width)), 0.1);
    j["samples_cptp_eps0.1"] = sample_complexity(static_cast<double>(parameter_count(ChannelModel::Cptp, width)), 0.1);
    j["choi_error_raw"] = choi_frobenius_distance(res.raw, truth);
    j["choi_error_projected"] = choi_frobenius_distance(res.projected, truth);
    j["projection_iterations"] = res.iterations;
    j["cptp_defect"] = choi_cptp_defect(res.projected);
    j["unitary_fit_error"] = choi_frobenius_distance(choi(KrausChannel::unitary(u)), truth);
    if (width == 1) {
        const AffineBlochForm a = affine_bloch_form(res.projected);
        std::vector<std::vector<double>> m(3, std::vector<double>(3));
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m[r][c] = a.m(r, c);
        j["bloch_m"] = m;
        j["bloch_t"] = {a.t(0), a.t(1), a.t(2)};
    }
    out << j.dump(2) << '\n';
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Density-matrix simulator for non-unitary quantum PUF designs", "qpufsim"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "Master seed (all randomness derives from it)");
    app.add_option("--profile", g.profile, "ideal, athens, santiago, melbourne or a profile JSON file");
    app.add_option("--out", g.out, "Output file or directory");
    app.add_option("--config", g.config, "Experiment config JSON");

    InstanceArgs gen_args;
    std::string gen_challenge;
    bool gen_circuit = false;
    auto* gen = app.add_subcommand("gen", "Generate an instance and print its JSON");
    gen_args.attach(gen);
    gen->add_option("--challenge", gen_challenge, "Challenge used by --circuit");
    gen->add_flag("--circuit", gen_circuit, "Print the circuit text of a D or MF instance instead");

    InstanceArgs eval_args;
    std::string eval_challenge;
    std::uint64_t eval_shots = 10000;
    auto* eval = app.add_subcommand("eval", "Evaluate one challenge");
    eval_args.attach(eval);
    eval->add_option("--challenge", eval_challenge, "Challenge bit string")->required();
    eval->add_option("--shots", eval_shots, "Measurement shots");

    std::string exp_arch, exp_n;
    std::size_t exp_instances = 0, exp_challenges = 0, exp_repeats = 0, exp_m = 0, exp_f = 0, exp_r = 0;
    std::uint64_t exp_shots = 0;
    double exp_jitter = -1.0;
    bool exp_no_quantum = false, exp_quiet = false;
    auto* exp = app.add_subcommand("experiment", "Run the full evaluation protocol");
    exp->add_option("--arch", exp_arch, "Comma-separated architectures");
    exp->add_option("--n", exp_n, "Comma-separated register sizes");
    exp->add_option("--instances", exp_instances, "Instances per (arch, n)");
    exp->add_option("--challenges", exp_challenges, "Challenges per instance");
    exp->add_option("--shots", exp_shots, "Shots per evaluation");
    exp->add_option("--repeats", exp_repeats, "Re-evaluations for reliability");
    exp->add_option("--m", exp_m, "Lindblad blocks (L)");
    exp->add_option("--f", exp_f, "Feedback rounds (MF)");
    exp->add_option("--trotter-r", exp_r, "Trotter steps per window (L)");
    exp->add_option("--jitter", exp_jitter, "Rate drift fraction per repeat");
    exp->add_flag("--no-quantum", exp_no_quantum, "Skip trace-norm metrics");
    exp->add_flag("--quiet", exp_quiet, "No progress lines on stderr");

    std::string archive;
    auto* met = app.add_subcommand("metrics", "Recompute metrics from an experiment archive");
    met->add_option("--archive", archive, "Archive directory")->required();

    InstanceArgs tomo_args;
    std::size_t tomo_width = 1;
    std::string tomo_challenge;
    std::uint64_t tomo_shots = 1000;
    bool tomo_exact = false;
    auto* tomo = app.add_subcommand("tomography", "Process tomography of an instance channel");
    tomo_args.attach(tomo);
    tomo->add_option("--width", tomo_width, "Probed qubits (1 or 2)");
    tomo->add_option("--challenge", tomo_challenge, "Challenge selecting noise and gate patterns");
    tomo->add_option("--shots", tomo_shots, "Shots per measurement setting");
    tomo->add_flag("--exact", tomo_exact, "Exact statistics instead of sampling");

    std::string prof_name;
    auto* profs = app.add_subcommand("profiles", "List or export built-in backend profiles");
    profs->add_option("--name", prof_name, "Print one profile as JSON");

    std::string plot_archive;
    auto* plot = app.add_subcommand("plotdata", "Write plot series from an archive");
    plot->add_option("--archive", plot_archive, "Archive directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (*gen) {
            const QpufInstance inst = gen_args.make(g.seed);
            if (gen_circuit) {
                if (inst.arch == Arch::L) {
                    throw std::invalid_argument("the Lindblad design has no single-circuit form");
                }
                const std::string ch = gen_challenge.empty() ? std::string(inst.n_qubits, '0') : gen_challenge;
                const Circuit c = inst.arch == Arch::D ? dqpuf_build(inst, ch) : mfqpuf_build(inst, ch);
                const std::string text = to_text(c);
                if (!g.out.empty()) spill(g.out, text);
                out << text;
                return 0;
            }
            const std::string json = instance_to_json(inst);
            if (!g.out.empty()) spill(g.out, json + "\n");
            out << json << '\n';
        } else if (*eval) {
            const QpufInstance inst = eval_args.make(g.seed);
            validate_challenge(eval_challenge, inst.n_qubits);
            const auto profile = resolve_profile(g.profile);
            const Response r = qeval(inst, eval_challenge, eval_shots, shot_seed(inst.seed, eval_challenge, 0),
                                     profile ? &*profile : nullptr);
            const std::string json = response_json(inst, eval_challenge, r, profile ? profile->name : "ideal");
            if (!g.out.empty()) spill(g.out, json + "\n");
            out << json << '\n';
        } else if (*exp) {
            ExperimentConfig cfg;
            if (!g.config.empty()) cfg = config_from_json(slurp(g.config));
            if (app.count("--seed")) cfg.master_seed = g.seed;
            if (app.count("--profile")) cfg.profile = g.profile;
            if (app.count("--out")) cfg.output_dir = g.out;
            if (exp->count("--arch")) {
                cfg.archs.clear();
                for (const auto& a : split_list(exp_arch)) cfg.archs.push_back(parse_arch(a));
            }
            if (exp->count("--n")) {
                cfg.n_qubits.clear();
                for (const auto& s : split_list(exp_n)) cfg.n_qubits.push_back(std::stoul(s));
            }
            if (exp->count("--instances")) cfg.n_instances = exp_instances;
            if (exp->count("--challenges")) cfg.n_challenges = exp_challenges;
            if (exp->count("--shots")) cfg.shots = exp_shots;
            if (exp->count("--repeats")) cfg.repeats = exp_repeats;
            if (exp->count("--m")) cfg.gen.m = exp_m;
            if (exp->count("--f")) cfg.gen.f = exp_f;
            if (exp->count("--trotter-r")) cfg.gen.trotter_r = exp_r;
            if (exp->count("--jitter")) cfg.rate_jitter = exp_jitter;
            if (exp_no_quantum) cfg.quantum_metrics = false;
            const ExperimentResult res = run_experiment(cfg, exp_quiet ? nullptr : &err);
            if (!cfg.output_dir.empty()) write_experiment(res, cfg, cfg.output_dir);
            out << reports_to_csv(res.reports);
        } else if (*met) {
            const auto reports = recompute_metrics(archive);
            const std::string csv = reports_to_csv(reports);
            if (!g.out.empty()) spill(g.out, csv);
            out << csv;
        } else if (*tomo) {
            return cmd_tomography(tomo_args.make(g.seed), tomo_width, tomo_challenge, tomo_shots, tomo_exact, g.seed,
                                  out);
        } else if (*profs) {
            if (!prof_name.empty()) {
                const std::string json = profile_to_json(builtin_profile(prof_name));
                if (!g.out.empty()) spill(g.out, json + "\n");
                out << json << '\n';
            } else {
                for (const auto& p : builtin_profiles()) {
                    double t1 = 0, t2 = 0, ro = 0;
                    for (const auto& q : p.qubits) {
                        t1 += q.t1_us;
                        t2 += q.t2_us;
                        ro += q.readout_error;
                    }
                    const double k = static_cast<double>(p.n_qubits());
                    char line[160];
                    std::snprintf(line, sizeof line, "%-10s qubits=%-3zu mean_t1_us=%.2f mean_t2_us=%.2f mean_readout_pct=%.2f",
                                  p.name.c_str(), p.n_qubits(), t1 / k, t2 / k, 100.0 * ro / k);
                    out << line << '\n';
                    if (!g.out.empty()) spill((std::filesystem::path(g.out) / (p.name + ".json")).string(),
                                              profile_to_json(p) + "\n");
                }
            }
        } else if (*plot) {
            const std::string dir = g.out.empty() ? plot_archive + "/plots" : g.out;
            for (const auto& f : emit_plot_data(plot_archive, dir)) out << f << '\n';
        }
    } catch (const GuardError& e) {
        err << "guard: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace qpufsim
