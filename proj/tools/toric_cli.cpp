// Copyright 2026 The Local Toric Decoders Authors
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

// Command-line driver: simulate, fit and trace.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "toric/config.hpp"
#include "toric/experiment.hpp"
#include "toric/fitting.hpp"
#include "toric/report.hpp"
#include "toric/trace.hpp"

#ifndef TORIC_VERSION
#define TORIC_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::ofstream open_out(const fs::path &p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + p.string() + "'.");
    }
    return out;
}

json manifest(const toric::ExperimentPlan &plan, const std::string &config_path, const std::string &command) {
    json m;
    m["command"] = command;
    m["config_path"] = config_path;
    m["config"] = plan.raw;
    m["seed"] = plan.base.seed;
    m["version"] = TORIC_VERSION;
    m["start"] = utc_now();
    return m;
}

int cmd_simulate(const std::string &config_path, const std::string &out_dir, int workers, std::optional<std::uint64_t> seed) {
    toric::ExperimentPlan plan = toric::parse_config_file(config_path);
    if (seed) {
        plan.base.seed = *seed;
        plan.raw["seed"] = std::to_string(*seed);
    }
    fs::create_directories(out_dir);
    const fs::path results_path = fs::path(out_dir) / "results.csv";
    const fs::path trials_path = fs::path(out_dir) / "trials.csv";
    const fs::path manifest_path = fs::path(out_dir) / "manifest.json";
    json m = manifest(plan, config_path, "simulate");
    m["workers"] = workers;
    m["outputs"] = {results_path.string(), trials_path.string()};

    auto results = open_out(results_path);
    auto trials = open_out(trials_path);
    toric::write_results_header(results);
    toric::write_trials_header(trials);
    const auto points = plan.points();
    for (std::size_t i = 0; i < points.size(); i++) {
        const auto &c = points[i];
        std::cerr << "point " << i + 1 << "/" << points.size() << ": " << toric::code_name(c.code) << " "
                  << toric::decoder_name(c.decoder) << " L=" << c.L << " p=" << c.noise.p << " q=" << c.noise.q << " ("
                  << c.trials << " trials)\n";
        toric::MemoryTimeResult r = toric::monte_carlo(c, workers);
        toric::write_results_row(results, c, r);
        for (std::size_t t = 0; t < r.trials.size(); t++) {
            toric::write_trial_row(trials, i, static_cast<long long>(t), c, r.trials[t]);
        }
        results.flush();
        trials.flush();
        std::cerr << "  mean_T=" << r.mean_T << " stderr_T=" << r.stderr_T << " censored=" << r.n_censored << "\n";
    }
    m["end"] = utc_now();
    open_out(manifest_path) << m.dump(2) << '\n';
    return 0;
}

int cmd_fit(const std::string &input, const std::string &model, const std::string &out_dir, double p_min, double p_max,
            int bootstrap, std::uint64_t seed) {
    std::ifstream in(input);
    if (!in) {
        throw std::runtime_error("cannot open results CSV '" + input + "'.");
    }
    toric::ResultsTable table = toric::read_results(in);
    auto data = toric::fit_points(table, p_min, p_max);
    std::ostringstream report;
    if (model == "eq1") {
        const auto cu = table.column("U");
        const auto cq = table.column("Q");
        if (table.rows.empty() || table.rows.front()[cu].empty()) {
            throw std::runtime_error("eq1 needs Harrington rows with U and Q columns.");
        }
        const int U = std::stoi(table.rows.front()[cu]);
        const int Q = std::stoi(table.rows.front()[cq]);
        for (const auto &r : table.rows) {
            if (std::stoi(r[cu]) != U || std::stoi(r[cq]) != Q) {
                throw std::runtime_error("eq1 fit needs a single (U, Q) across rows.");
            }
        }
        toric::write_eq1_report(report, toric::fit_eq1(data, U, Q), data.size());
    } else {
        toric::Eq2Options opt;
        opt.bootstrap = bootstrap;
        opt.seed = seed;
        toric::write_eq2_report(report, toric::fit_eq2(data, opt), data.size());
    }
    std::cout << report.str();
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        open_out(fs::path(out_dir) / "fit.txt") << "input = " << input << '\n' << report.str();
    }
    return 0;
}

json event_json(const toric::TraceEvent &e) {
    json j;
    j["seq"] = e.seq;
    j["cycle"] = e.cycle;
    j["kind"] = toric::trace_kind_name(e.kind);
    switch (e.kind) {
        case toric::TraceKind::kNoiseApplied:
        case toric::TraceKind::kFlip:
            j["source"] = e.source;
            j["cells"] = e.cells;
            if (e.kind == toric::TraceKind::kFlip && e.source != "decoder") {
                j["time"] = e.time;
            }
            break;
        case toric::TraceKind::kSyndromeMeasured:
            j["checks"] = e.cells;
            break;
        case toric::TraceKind::kCorrectionScheduled:
        case toric::TraceKind::kCorrectionApplied:
            j["level"] = e.level;
            j["time"] = e.time;
            j["cells"] = e.cells;
            break;
        case toric::TraceKind::kFailureTest:
            j["failed"] = e.failed;
            j["outcome"] = e.outcome;
            break;
    }
    return j;
}

int cmd_trace(const std::string &config_path, const std::string &out_dir, std::optional<std::uint64_t> seed, long long trial) {
    toric::ExperimentPlan plan = toric::parse_config_file(config_path);
    if (seed) {
        plan.base.seed = *seed;
        plan.raw["seed"] = std::to_string(*seed);
    }
    const auto points = plan.points();
    if (points.size() != 1) {
        throw std::runtime_error("trace needs a config with a single L and a single p.");
    }
    fs::create_directories(out_dir);
    const fs::path trace_path = fs::path(out_dir) / "trace.jsonl";
    json m = manifest(plan, config_path, "trace");
    m["trial"] = trial;
    m["outputs"] = {trace_path.string()};
    auto out = open_out(trace_path);
    auto r = toric::run_trace(points.front(), static_cast<std::uint64_t>(trial), plan.inject,
                              [&](const toric::TraceEvent &e) { out << event_json(e).dump() << '\n'; });
    m["end"] = utc_now();
    m["result"] = {{"T", r.T}, {"censored", r.censored}, {"outcome", toric::outcome_name(r.outcome)}};
    open_out(fs::path(out_dir) / "manifest.json") << m.dump(2) << '\n';
    std::cerr << "trace: T=" << r.T << (r.censored ? " (censored)" : "") << ", " << trace_path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Local decoders for the 2D and 4D toric code"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    int workers = 1;
    std::optional<std::uint64_t> seed;

    auto *sim = app.add_subcommand("simulate", "Run memory experiments and write results CSVs");
    sim->add_option("--config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
    sim->add_option("--out", out_dir, "Output directory");
    sim->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    sim->add_option("--seed", seed, "Override the config seed");

    std::string input;
    std::string model = "eq2";
    double p_min = 0;
    double p_max = 1;
    int bootstrap = 1000;
    std::string fit_out;
    std::uint64_t fit_seed = 1;
    auto *fit = app.add_subcommand("fit", "Fit memory times from a results CSV");
    fit->add_option("--input", input, "Results CSV")->required()->check(CLI::ExistingFile);
    fit->add_option("--model", model, "eq1 (concatenation ansatz) or eq2 (finite-size scaling)")
        ->check(CLI::IsMember({"eq1", "eq2"}));
    fit->add_option("--p-min", p_min, "Lowest p kept in the fit window");
    fit->add_option("--p-max", p_max, "Highest p kept in the fit window");
    fit->add_option("--bootstrap", bootstrap, "Bootstrap resamples for eq2 error bars");
    fit->add_option("--seed", fit_seed, "Bootstrap seed");
    fit->add_option("--out", fit_out, "Directory for fit.txt");

    long long trial = 0;
    std::string trace_out = "trace";
    auto *trace = app.add_subcommand("trace", "Record one trial as JSON lines");
    trace->add_option("--config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
    trace->add_option("--out", trace_out, "Output directory");
    trace->add_option("--seed", seed, "Override the config seed");
    trace->add_option("--trial", trial, "Trial index (RNG stream)")->check(CLI::NonNegativeNumber);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*sim) {
            return cmd_simulate(config_path, out_dir, workers, seed);
        }
        if (*fit) {
            return cmd_fit(input, model, fit_out, p_min, p_max, bootstrap, fit_seed);
        }
        if (*trace) {
            return cmd_trace(config_path, trace_out, seed, trial);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
