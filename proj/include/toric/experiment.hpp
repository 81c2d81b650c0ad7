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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "toric/decoders4d.hpp"
#include "toric/failure4d.hpp"
#include "toric/harrington.hpp"
#include "toric/lattice.hpp"
#include "toric/matching.hpp"
#include "toric/noise.hpp"
#include "toric/rng.hpp"

namespace toric {

enum class CodeKind { k2D, k4D };

inline const char *code_name(CodeKind c) {
    return c == CodeKind::k2D ? "2d" : "4d";
}

struct ExperimentConfig {
    CodeKind code = CodeKind::k2D;
    int L = 9;
    NoiseParams noise;
    DecoderKind decoder = DecoderKind::kHarrington;
    HarringtonConfig harrington;
    HastingsConfig hastings;
    SweepConfig sweep;
    ConvergenceCaps caps;
    long long trials = 1;
    std::uint64_t seed = 0;
    long long max_cycles = 100000;
    /// Run the failure test only every this many cycles.
    int check_every = 1;
    /// 2D only: accept the rough test's verdict before running matching.
    bool preselect = true;

    void validate() const {
        noise.validate();
        if (trials < 1) {
            throw std::invalid_argument("trials must be >= 1.");
        }
        if (max_cycles < 1) {
            throw std::invalid_argument("max_cycles must be >= 1.");
        }
        if (check_every < 1) {
            throw std::invalid_argument("check_every must be >= 1.");
        }
        if (code == CodeKind::k2D) {
            if (decoder != DecoderKind::kHarrington) {
                throw std::invalid_argument("the 2d code only supports the harrington decoder.");
            }
            harrington.validate_for(L, noise.q);
        } else {
            if (L < 2) {
                throw std::invalid_argument("L must be >= 2 for the 4d code.");
            }
            switch (decoder) {
                case DecoderKind::kHastings:
                    hastings.validate(L);
                    break;
                case DecoderKind::kToom:
                case DecoderKind::kDklp:
                    sweep.validate();
                    break;
                default:
                    throw std::invalid_argument("the 4d code supports hastings, toom or dklp.");
            }
        }
        if (caps.max_iterations < 1 || caps.stagnation_window < 1) {
            throw std::invalid_argument("convergence caps must be positive.");
        }
    }
};

struct TrialResult {
    long long T = 0;  // first failing cycle (1-based), or max_cycles when censored
    bool censored = false;
    OutcomeClass outcome = OutcomeClass::kLogicalFailure;
};

struct MemoryTimeResult {
    double mean_T = 0;
    double stderr_T = 0;
    long long n_censored = 0;
    FailureStats stats;  // counts over failing trials; censored trials count as restored
    std::vector<TrialResult> trials;
};

inline bool is_check_cycle(const ExperimentConfig &config, long long cycle) {
    return cycle % config.check_every == 0 || cycle == config.max_cycles;
}

/// One 2D memory experiment with the Harrington automaton.
inline TrialResult run_trial_2d(const Torus2D &torus, const ExperimentConfig &config, std::uint64_t stream) {
    const TrialRng base(config.seed, stream);
    HarringtonDecoder decoder(torus, config.harrington);
    Chain error = torus.zero_chain(1);
    TrialResult out;
    for (long long cycle = 1; cycle <= config.max_cycles; cycle++) {
        TrialRng data = base.derive(static_cast<std::uint64_t>(cycle), Phase::kDataNoise);
        TrialRng meas = base.derive(static_cast<std::uint64_t>(cycle), Phase::kMeasurementNoise);
        apply_data_noise(error, config.noise, data);
        Chain measured = measure_syndrome(torus, error, config.noise, meas);
        decoder.run_cycle(error, measured);
        if (is_check_cycle(config, cycle) && logical_failure_2d(torus, error, config.preselect)) {
            out.T = cycle;
            out.outcome = OutcomeClass::kLogicalFailure;
            return out;
        }
    }
    out.T = config.max_cycles;
    out.censored = true;
    out.outcome = OutcomeClass::kRestored;
    return out;
}

/// One 4D memory experiment; `decoder` is shared read-only between trials.
inline TrialResult run_trial_4d(const Torus4D &torus, const Decoder4D &decoder, const ExperimentConfig &config,
                                std::uint64_t stream) {
    const TrialRng base(config.seed, stream);
    Chain error = torus.zero_chain(2);
    TrialResult out;
    for (long long cycle = 1; cycle <= config.max_cycles; cycle++) {
        const auto c = static_cast<std::uint64_t>(cycle);
        TrialRng data = base.derive(c, Phase::kDataNoise);
        TrialRng meas = base.derive(c, Phase::kMeasurementNoise);
        TrialRng dec = base.derive(c, Phase::kDecoder);
        apply_data_noise(error, config.noise, data);
        Chain measured = measure_syndrome(torus, error, config.noise, meas);
        decoder.run_cycle(error, measured, dec);
        if (!is_check_cycle(config, cycle)) {
            continue;
        }
        TrialRng probe = base.derive(c, Phase::kProbe);
        ConvergenceOutcome o = converge_perfect(torus, decoder, error, probe, config.caps);
        if (o.cls != OutcomeClass::kRestored) {
            out.T = cycle;
            out.outcome = o.cls;
            return out;
        }
    }
    out.T = config.max_cycles;
    out.censored = true;
    out.outcome = OutcomeClass::kRestored;
    return out;
}

inline MemoryTimeResult summarize(std::vector<TrialResult> trials) {
    MemoryTimeResult r;
    const auto n = static_cast<double>(trials.size());
    double sum = 0;
    for (const auto &t : trials) {
        sum += static_cast<double>(t.T);
        r.n_censored += t.censored ? 1 : 0;
        if (!t.censored) {
            r.stats.record(ConvergenceOutcome{t.outcome, 0, false});
        } else {
            r.stats.n_restored++;
        }
    }
    r.mean_T = trials.empty() ? 0 : sum / n;
    if (trials.size() > 1) {
        double ss = 0;
        for (const auto &t : trials) {
            const double d = static_cast<double>(t.T) - r.mean_T;
            ss += d * d;
        }
        r.stderr_T = std::sqrt(ss / (n - 1) / n);
    }
    r.trials = std::move(trials);
    return r;
}

/// Runs `config.trials` independent trials on `workers` threads. Trial i always uses
/// stream i, so the per-trial results do not depend on the number of workers.
inline MemoryTimeResult monte_carlo(const ExperimentConfig &config, int workers = 1,
                                    const std::function<void(long long, const TrialResult &)> &on_trial = {}) {
    config.validate();
    workers = std::max(1, workers);
    std::vector<TrialResult> results(static_cast<std::size_t>(config.trials));
    std::atomic<long long> next{0};
    std::mutex report_mutex;
    std::exception_ptr failure;

    std::function<TrialResult(long long)> run_one;
    std::optional<Torus2D> torus2;
    std::optional<Torus4D> torus4;
    std::optional<Decoder4D> decoder4;
    if (config.code == CodeKind::k2D) {
        torus2.emplace(config.L);
        run_one = [&](long long i) { return run_trial_2d(*torus2, config, static_cast<std::uint64_t>(i)); };
    } else {
        torus4.emplace(config.L);
        decoder4.emplace(*torus4, config.decoder, config.hastings, config.sweep);
        run_one = [&](long long i) { return run_trial_4d(*torus4, *decoder4, config, static_cast<std::uint64_t>(i)); };
    }

    auto work = [&] {
        while (true) {
            const long long i = next.fetch_add(1);
            if (i >= config.trials) {
                return;
            }
            try {
                TrialResult r = run_one(i);
                results[static_cast<std::size_t>(i)] = r;
                if (on_trial) {
                    std::lock_guard<std::mutex> lock(report_mutex);
                    on_trial(i, r);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(report_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(config.trials);
                return;
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; w++) {
            pool.emplace_back(work);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return summarize(std::move(results));
}

}  // namespace toric
