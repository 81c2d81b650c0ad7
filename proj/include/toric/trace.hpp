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

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "toric/experiment.hpp"

namespace toric {

enum class TraceKind { kNoiseApplied, kSyndromeMeasured, kFlip, kCorrectionScheduled, kCorrectionApplied, kFailureTest };

inline const char *trace_kind_name(TraceKind k) {
    switch (k) {
        case TraceKind::kNoiseApplied:
            return "noise_applied";
        case TraceKind::kSyndromeMeasured:
            return "syndrome_measured";
        case TraceKind::kFlip:
            return "flip";
        case TraceKind::kCorrectionScheduled:
            return "correction_scheduled";
        case TraceKind::kCorrectionApplied:
            return "correction_applied";
        case TraceKind::kFailureTest:
            return "failure_test";
    }
    return "?";
}

/// One trace record. `cells` holds qubit indices for noise and flips (XOR deltas on
/// the error chain) and check indices for measured syndromes.
struct TraceEvent {
    long long cycle = 0;
    long long seq = 0;  // total order within the trial
    TraceKind kind = TraceKind::kFlip;
    std::string source;  // noise: data|injected; flip: level0|correction|decoder
    std::vector<std::uint32_t> cells;
    int level = 0;  // correction events
    long long time = 0;  // CA step for 2d events
    bool failed = false;  // failure_test
    std::string outcome;  // failure_test
};

using TraceSink = std::function<void(const TraceEvent &)>;

namespace detail {

inline std::vector<std::uint32_t> chain_delta(const Chain &before, const Chain &after) {
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < before.size(); i++) {
        if (before.bits[i] != after.bits[i]) {
            out.push_back(static_cast<std::uint32_t>(i));
        }
    }
    return out;
}

}  // namespace detail

/// Runs trial `stream` of `config` and reports every event to `sink`. `inject` flips the
/// listed qubits before the first cycle. The RNG streams match run_trial_2d/4d, so
/// without injection the returned result equals the simulate result for that trial.
/// The error chain at the end of the trial is copied to `final_error` when given.
inline TrialResult run_trace(const ExperimentConfig &config, std::uint64_t stream, const std::vector<std::uint32_t> &inject,
                             const TraceSink &sink, Chain *final_error = nullptr) {
    config.validate();
    long long seq = 0;
    long long cycle = 0;
    auto emit = [&](TraceEvent ev) {
        ev.cycle = cycle;
        ev.seq = seq++;
        sink(ev);
    };
    const TrialRng base(config.seed, stream);
    TrialResult out;

    auto injected = [&](Chain &error) {
        if (inject.empty()) {
            return;
        }
        for (auto i : inject) {
            if (i >= error.size()) {
                throw std::invalid_argument("inject: qubit index " + std::to_string(i) + " is out of range.");
            }
            error.bits[i] ^= 1;
        }
        TraceEvent ev;
        ev.kind = TraceKind::kNoiseApplied;
        ev.source = "injected";
        ev.cells = inject;
        emit(ev);
    };

    if (config.code == CodeKind::k2D) {
        Torus2D torus(config.L);
        HarringtonDecoder decoder(torus, config.harrington);
        HarringtonEvents events;
        events.on_flip = [&](const FlipDecision &f) {
            TraceEvent ev;
            ev.kind = TraceKind::kFlip;
            ev.source = "level0";
            ev.cells = {f.edge};
            ev.time = decoder.time();
            emit(ev);
        };
        events.on_scheduled = [&](const ScheduledCorrection &c) {
            TraceEvent ev;
            ev.kind = TraceKind::kCorrectionScheduled;
            ev.cells = c.edges;
            ev.level = c.level;
            ev.time = c.decided_at;
            emit(ev);
        };
        events.on_applied = [&](const ScheduledCorrection &c) {
            TraceEvent ev;
            ev.kind = TraceKind::kCorrectionApplied;
            ev.cells = c.edges;
            ev.level = c.level;
            ev.time = c.apply_at;
            emit(ev);
            ev.kind = TraceKind::kFlip;
            ev.source = "correction";
            emit(ev);
        };
        decoder.set_events(events);
        Chain error = torus.zero_chain(1);
        injected(error);
        for (cycle = 1; cycle <= config.max_cycles; cycle++) {
            TrialRng data = base.derive(static_cast<std::uint64_t>(cycle), Phase::kDataNoise);
            TrialRng meas = base.derive(static_cast<std::uint64_t>(cycle), Phase::kMeasurementNoise);
            Chain before = error;
            apply_data_noise(error, config.noise, data);
            TraceEvent noise;
            noise.kind = TraceKind::kNoiseApplied;
            noise.source = "data";
            noise.cells = detail::chain_delta(before, error);
            emit(noise);
            Chain measured = measure_syndrome(torus, error, config.noise, meas);
            TraceEvent syn;
            syn.kind = TraceKind::kSyndromeMeasured;
            syn.cells = measured.support();
            emit(syn);
            decoder.run_cycle(error, measured);
            if (!is_check_cycle(config, cycle)) {
                continue;
            }
            const bool failed = logical_failure_2d(torus, error, config.preselect);
            TraceEvent test;
            test.kind = TraceKind::kFailureTest;
            test.failed = failed;
            test.outcome = failed ? "logical_failure" : "restored";
            emit(test);
            if (failed) {
                if (final_error) {
                    *final_error = error;
                }
                out.T = cycle;
                out.outcome = OutcomeClass::kLogicalFailure;
                return out;
            }
        }
        if (final_error) {
            *final_error = error;
        }
    } else {
        Torus4D torus(config.L);
        Decoder4D decoder(torus, config.decoder, config.hastings, config.sweep);
        Chain error = torus.zero_chain(2);
        injected(error);
        for (cycle = 1; cycle <= config.max_cycles; cycle++) {
            const auto c = static_cast<std::uint64_t>(cycle);
            TrialRng data = base.derive(c, Phase::kDataNoise);
            TrialRng meas = base.derive(c, Phase::kMeasurementNoise);
            TrialRng dec = base.derive(c, Phase::kDecoder);
            Chain before = error;
            apply_data_noise(error, config.noise, data);
            TraceEvent noise;
            noise.kind = TraceKind::kNoiseApplied;
            noise.source = "data";
            noise.cells = detail::chain_delta(before, error);
            emit(noise);
            Chain measured = measure_syndrome(torus, error, config.noise, meas);
            TraceEvent syn;
            syn.kind = TraceKind::kSyndromeMeasured;
            syn.cells = measured.support();
            emit(syn);
            Chain correction = decoder.run_cycle(error, measured, dec);
            if (!correction.empty()) {
                TraceEvent flip;
                flip.kind = TraceKind::kFlip;
                flip.source = "decoder";
                flip.cells = correction.support();
                emit(flip);
            }
            if (!is_check_cycle(config, cycle)) {
                continue;
            }
            TrialRng probe = base.derive(c, Phase::kProbe);
            ConvergenceOutcome o = converge_perfect(torus, decoder, error, probe, config.caps);
            TraceEvent test;
            test.kind = TraceKind::kFailureTest;
            test.failed = o.cls != OutcomeClass::kRestored;
            test.outcome = outcome_name(o.cls);
            emit(test);
            if (test.failed) {
                if (final_error) {
                    *final_error = error;
                }
                out.T = cycle;
                out.outcome = o.cls;
                return out;
            }
        }
        if (final_error) {
            *final_error = error;
        }
    }
    cycle = config.max_cycles;
    out.T = config.max_cycles;
    out.censored = true;
    out.outcome = OutcomeClass::kRestored;
    return out;
}

}  // namespace toric
