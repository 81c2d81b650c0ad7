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
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "toric/experiment.hpp"

namespace toric {

/// Raised for malformed or out-of-range configuration; the message names the key.
class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// A sweep over (L, p) sharing every other setting. q either tracks p or is fixed.
struct ExperimentPlan {
    ExperimentConfig base;
    std::vector<int> Ls;
    std::vector<double> ps;
    bool q_tracks_p = false;
    double q = 0;
    std::vector<std::uint32_t> inject;  // trace only: cells flipped before the first cycle
    std::map<std::string, std::string> raw;  // normalized key/value snapshot

    std::vector<ExperimentConfig> points() const {
        std::vector<ExperimentConfig> out;
        for (int L : Ls) {
            for (double p : ps) {
                ExperimentConfig c = base;
                c.L = L;
                c.noise.p = p;
                c.noise.q = q_tracks_p ? p : q;
                out.push_back(c);
            }
        }
        return out;
    }
};

namespace detail {

inline std::string trim(const std::string &s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) {
        return "";
    }
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_list(const std::string &v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

template <typename T>
T parse_number(const std::string &key, const std::string &v) {
    T out{};
    const char *end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as a number.");
    }
    return out;
}

inline bool parse_bool(const std::string &key, const std::string &v) {
    if (v == "true" || v == "1" || v == "yes") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no") {
        return false;
    }
    throw ConfigError("config key '" + key + "': expected true or false, got '" + v + "'.");
}

}  // namespace detail

inline const std::set<std::string> &known_config_keys() {
    static const std::set<std::string> keys{
        "code", "decoder", "L", "p", "q", "trials", "seed", "max_cycles", "check_every", "preselect",
        "Q", "U", "f_c", "f_n", "strategy", "b", "tau", "infinite_step_cap",
        "l", "m", "surface_node_budget", "repeats_per_plane", "max_iterations", "stagnation_window", "inject"};
    return keys;
}

/// Reads `key = value` lines ('#' starts a comment).
inline std::map<std::string, std::string> read_key_values(std::istream &in, const std::string &origin) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'.");
        }
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key or value.");
        }
        if (!kv.emplace(key, value).second) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": key '" + key + "' given twice.");
        }
    }
    return kv;
}

/// Builds and validates a plan from parsed key/values. Unknown keys are rejected.
inline ExperimentPlan plan_from_key_values(const std::map<std::string, std::string> &kv) {
    for (const auto &[k, v] : kv) {
        if (!known_config_keys().count(k)) {
            throw ConfigError("unknown config key '" + k + "'.");
        }
    }
    auto need = [&](const std::string &k) -> const std::string & {
        auto it = kv.find(k);
        if (it == kv.end()) {
            throw ConfigError("missing required config key '" + k + "'.");
        }
        return it->second;
    };
    auto get = [&](const std::string &k) -> const std::string * {
        auto it = kv.find(k);
        return it == kv.end() ? nullptr : &it->second;
    };
    using detail::parse_number;

    ExperimentPlan plan;
    plan.raw = kv;
    ExperimentConfig &c = plan.base;
    const std::string &code = need("code");
    if (code == "2d") {
        c.code = CodeKind::k2D;
        c.decoder = DecoderKind::kHarrington;
    } else if (code == "4d") {
        c.code = CodeKind::k4D;
    } else {
        throw ConfigError("config key 'code': expected 2d or 4d, got '" + code + "'.");
    }
    if (const auto *d = get("decoder")) {
        if (*d == "harrington") {
            c.decoder = DecoderKind::kHarrington;
        } else if (*d == "hastings") {
            c.decoder = DecoderKind::kHastings;
        } else if (*d == "toom") {
            c.decoder = DecoderKind::kToom;
        } else if (*d == "dklp") {
            c.decoder = DecoderKind::kDklp;
        } else {
            throw ConfigError("config key 'decoder': expected harrington, hastings, toom or dklp, got '" + *d + "'.");
        }
    } else if (c.code == CodeKind::k4D) {
        throw ConfigError("missing required config key 'decoder' (hastings, toom or dklp) for the 4d code.");
    }
    if ((c.code == CodeKind::k2D) != (c.decoder == DecoderKind::kHarrington)) {
        throw ConfigError("config key 'decoder': harrington runs on the 2d code, hastings/toom/dklp on the 4d code.");
    }

    for (const auto &s : detail::split_list(need("L"))) {
        plan.Ls.push_back(parse_number<int>("L", s));
    }
    for (const auto &s : detail::split_list(need("p"))) {
        plan.ps.push_back(parse_number<double>("p", s));
    }
    if (plan.Ls.empty() || plan.ps.empty()) {
        throw ConfigError("config keys 'L' and 'p' need at least one value.");
    }
    const std::string &q = need("q");
    if (q == "p") {
        plan.q_tracks_p = true;
    } else {
        plan.q = parse_number<double>("q", q);
    }
    c.trials = parse_number<long long>("trials", need("trials"));
    if (const auto *v = get("seed")) {
        c.seed = parse_number<std::uint64_t>("seed", *v);
    }
    if (const auto *v = get("max_cycles")) {
        c.max_cycles = parse_number<long long>("max_cycles", *v);
    }
    if (const auto *v = get("check_every")) {
        c.check_every = parse_number<int>("check_every", *v);
    }
    if (const auto *v = get("preselect")) {
        c.preselect = detail::parse_bool("preselect", *v);
    }

    HarringtonConfig &h = c.harrington;
    if (const auto *v = get("Q")) {
        h.Q = parse_number<int>("Q", *v);
    }
    if (const auto *v = get("U")) {
        h.U = parse_number<int>("U", *v);
    }
    if (const auto *v = get("f_c")) {
        h.f_c = parse_number<double>("f_c", *v);
    }
    if (const auto *v = get("f_n")) {
        h.f_n = parse_number<double>("f_n", *v);
    }
    if (const auto *v = get("strategy")) {
        if (*v == "nondivision") {
            h.strategy = Strategy::kNonDivision;
        } else if (*v == "division") {
            h.strategy = Strategy::kDivision;
        } else {
            throw ConfigError("config key 'strategy': expected nondivision or division, got '" + *v + "'.");
        }
    }
    if (const auto *v = get("b")) {
        h.b = parse_number<int>("b", *v);
    }
    if (const auto *v = get("tau")) {
        h.tau = (*v == "inf") ? HarringtonConfig::kTauInfinite : parse_number<int>("tau", *v);
        if (*v != "inf" && h.tau < 1) {
            throw ConfigError("config key 'tau': expected a positive integer or 'inf'.");
        }
    }
    if (const auto *v = get("infinite_step_cap")) {
        h.infinite_step_cap = parse_number<long long>("infinite_step_cap", *v);
    }
    if (const auto *v = get("l")) {
        c.hastings.l = parse_number<int>("l", *v);
    }
    if (const auto *v = get("m")) {
        c.hastings.m = parse_number<int>("m", *v);
    }
    if (const auto *v = get("surface_node_budget")) {
        c.hastings.surface_node_budget = parse_number<std::uint64_t>("surface_node_budget", *v);
    }
    if (const auto *v = get("repeats_per_plane")) {
        c.sweep.repeats_per_plane = parse_number<int>("repeats_per_plane", *v);
    }
    if (const auto *v = get("max_iterations")) {
        c.caps.max_iterations = parse_number<int>("max_iterations", *v);
    }
    if (const auto *v = get("stagnation_window")) {
        c.caps.stagnation_window = parse_number<int>("stagnation_window", *v);
    }
    if (const auto *v = get("inject")) {
        for (const auto &s : detail::split_list(*v)) {
            plan.inject.push_back(parse_number<std::uint32_t>("inject", s));
        }
    }

    // Validate every grid point so errors surface before any work starts.
    for (const auto &point : plan.points()) {
        try {
            point.validate();
        } catch (const std::invalid_argument &e) {
            throw ConfigError("invalid configuration at L=" + std::to_string(point.L) + ", p=" +
                              std::to_string(point.noise.p) + ": " + e.what());
        }
    }
    return plan;
}

inline ExperimentPlan parse_config(std::istream &in, const std::string &origin = "<config>") {
    return plan_from_key_values(read_key_values(in, origin));
}

inline ExperimentPlan parse_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'.");
    }
    return parse_config(in, path);
}

}  // namespace toric
