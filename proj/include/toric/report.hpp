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

#pragma once

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "toric/experiment.hpp"
#include "toric/fitting.hpp"

namespace toric {

/// Shortest round-trip decimal form, independent of the C locale.
inline std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) {
        throw std::runtime_error("format_real: conversion failed.");
    }
    return std::string(buf, ptr);
}

inline const std::vector<std::string> &results_columns() {
    static const std::vector<std::string> cols{
        "code", "decoder", "L", "p", "q", "Q", "U", "f_c", "f_n", "strategy", "b", "tau", "l", "m",
        "repeats_per_plane", "max_cycles", "trials", "mean_T", "stderr_T", "n_censored", "n_res", "n_log", "n_restored"};
    return cols;
}

inline void write_results_header(std::ostream &out) {
    const auto &cols = results_columns();
    for (std::size_t i = 0; i < cols.size(); i++) {
        out << (i ? "," : "") << cols[i];
    }
    out << '\n';
}

/// One results row; parameters that do not apply to the decoder are left empty.
inline void write_results_row(std::ostream &out, const ExperimentConfig &c, const MemoryTimeResult &r) {
    const bool harr = c.decoder == DecoderKind::kHarrington;
    const bool hast = c.decoder == DecoderKind::kHastings;
    const bool sweep = c.decoder == DecoderKind::kToom || c.decoder == DecoderKind::kDklp;
    const auto &h = c.harrington;
    std::vector<std::string> f{
        code_name(c.code),
        decoder_name(c.decoder),
        std::to_string(c.L),
        format_real(c.noise.p),
        format_real(c.noise.q),
        harr ? std::to_string(h.Q) : "",
        harr ? std::to_string(h.U) : "",
        harr ? format_real(h.f_c) : "",
        harr ? format_real(h.f_n) : "",
        harr ? (h.strategy == Strategy::kDivision ? "division" : "nondivision") : "",
        harr && h.strategy == Strategy::kDivision ? std::to_string(h.b) : "",
        harr ? (h.tau_infinite() ? std::string("inf") : std::to_string(h.tau)) : "",
        hast ? std::to_string(c.hastings.l) : "",
        hast ? std::to_string(c.hastings.m) : "",
        sweep ? std::to_string(c.sweep.repeats_per_plane) : "",
        std::to_string(c.max_cycles),
        std::to_string(c.trials),
        format_real(r.mean_T),
        format_real(r.stderr_T),
        std::to_string(r.n_censored),
        std::to_string(r.stats.n_res),
        std::to_string(r.stats.n_log),
        std::to_string(r.stats.n_restored),
    };
    for (std::size_t i = 0; i < f.size(); i++) {
        out << (i ? "," : "") << f[i];
    }
    out << '\n';
}

inline void write_trials_header(std::ostream &out) {
    out << "point,trial,L,p,q,T,censored,outcome\n";
}

inline void write_trial_row(std::ostream &out, std::size_t point, long long trial, const ExperimentConfig &c,
                            const TrialResult &t) {
    out << point << ',' << trial << ',' << c.L << ',' << format_real(c.noise.p) << ',' << format_real(c.noise.q) << ','
        << t.T << ',' << (t.censored ? 1 : 0) << ',' << outcome_name(t.outcome) << '\n';
}

/// A results CSV read back as named columns.
struct ResultsTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string &name) const {
        for (std::size_t i = 0; i < header.size(); i++) {
            if (header[i] == name) {
                return i;
            }
        }
        throw std::invalid_argument("results CSV has no column '" + name + "'.");
    }
};

inline ResultsTable read_results(std::istream &in) {
    auto split = [](const std::string &line) {
        std::vector<std::string> out;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            out.push_back(cell);
        }
        if (!line.empty() && line.back() == ',') {
            out.emplace_back();
        }
        return out;
    };
    ResultsTable t;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("results CSV is empty.");
    }
    t.header = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        auto row = split(line);
        if (row.size() != t.header.size()) {
            throw std::invalid_argument("results CSV row has " + std::to_string(row.size()) + " fields, expected " +
                                        std::to_string(t.header.size()) + ".");
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

/// Fit points from a results table, keeping rows with p in [p_min, p_max].
inline std::vector<FitPoint> fit_points(const ResultsTable &t, double p_min, double p_max) {
    const auto cl = t.column("L");
    const auto cp = t.column("p");
    const auto cm = t.column("mean_T");
    const auto cs = t.column("stderr_T");
    std::vector<FitPoint> out;
    for (const auto &r : t.rows) {
        FitPoint f;
        f.L = std::stoi(r[cl]);
        f.p = std::stod(r[cp]);
        f.T = std::stod(r[cm]);
        f.stderr_T = std::stod(r[cs]);
        if (f.p >= p_min && f.p <= p_max) {
            out.push_back(f);
        }
    }
    return out;
}

inline void write_eq1_report(std::ostream &out, const Eq1Fit &f, std::size_t n_points) {
    out << "model = eq1\n"
        << "points = " << n_points << '\n'
        << "U = " << f.U << '\n'
        << "Q = " << f.Q << '\n'
        << "A = " << format_real(f.A) << '\n'
        << "B = " << format_real(f.B) << '\n'
        << "p_c = " << format_real(f.p_c) << '\n'
        << "residual_norm = " << format_real(f.residual_norm) << '\n';
}

inline void write_eq2_report(std::ostream &out, const Eq2Fit &f, std::size_t n_points) {
    out << "model = eq2\n"
        << "points = " << n_points << '\n'
        << "T_c = " << format_real(f.T_c) << " +- " << format_real(f.err_T_c) << '\n'
        << "p_c = " << format_real(f.p_c) << " +- " << format_real(f.err_p_c) << '\n'
        << "nu = " << format_real(f.nu) << " +- " << format_real(f.err_nu) << '\n'
        << "A = " << format_real(f.A) << " +- " << format_real(f.err_A) << '\n'
        << "B = " << format_real(f.B) << " +- " << format_real(f.err_B) << '\n'
        << "objective = " << format_real(f.objective) << '\n'
        << "bootstrap_resamples = " << f.bootstrap_used << '\n';
}

}  // namespace toric
