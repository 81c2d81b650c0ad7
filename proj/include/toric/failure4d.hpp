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
#include <stdexcept>
#include <unordered_set>

#include "toric/decoders4d.hpp"
#include "toric/lattice.hpp"
#include "toric/rng.hpp"

namespace toric {

enum class OutcomeClass { kRestored, kLogicalFailure, kResidualStuck };

inline const char *outcome_name(OutcomeClass c) {
    switch (c) {
        case OutcomeClass::kRestored:
            return "restored";
        case OutcomeClass::kLogicalFailure:
            return "logical_failure";
        case OutcomeClass::kResidualStuck:
            return "residual_stuck";
    }
    return "?";
}

struct ConvergenceOutcome {
    OutcomeClass cls = OutcomeClass::kRestored;
    int iterations_used = 0;
    bool hit_cap = false;  // residual_stuck because the iteration cap was reached
};

struct ConvergenceCaps {
    int max_iterations = 10000;
    int stagnation_window = 50;
};

/// Runs `decoder` with perfect syndromes on a copy of `error` until the syndrome
/// vanishes, a deterministic decoder revisits a state, or a stochastic decoder
/// fails to lower the syndrome weight for a whole stagnation window.
inline ConvergenceOutcome converge_perfect(const Torus4D &torus, const Decoder4D &decoder, Chain error,
                                           TrialRng &rng, const ConvergenceCaps &caps = {}) {
    ConvergenceOutcome out;
    std::unordered_set<std::uint64_t> seen;
    auto state_hash = [](const Chain &c) {
        std::uint64_t h = 0x9E3779B97F4A7C15ULL;
        for (std::size_t i = 0; i < c.size(); i++) {
            if (c.bits[i]) {
                std::uint64_t s = h ^ (i + 1);
                h = splitmix64(s);
            }
        }
        return h;
    };
    std::size_t best_weight = SIZE_MAX;
    int since_improvement = 0;
    for (int it = 0;; it++) {
        Chain syndrome = torus.syndrome_of(error);
        if (syndrome.empty()) {
            out.iterations_used = it;
            out.cls = Torus4D::any_bit(torus.homology_class(error)) ? OutcomeClass::kLogicalFailure
                                                                    : OutcomeClass::kRestored;
            return out;
        }
        if (it >= caps.max_iterations) {
            out.iterations_used = it;
            out.cls = OutcomeClass::kResidualStuck;
            out.hit_cap = true;
            return out;
        }
        if (decoder.deterministic()) {
            if (!seen.insert(state_hash(error)).second) {
                out.iterations_used = it;
                out.cls = OutcomeClass::kResidualStuck;
                return out;
            }
        } else {
            std::size_t w = syndrome.weight();
            if (w < best_weight) {
                best_weight = w;
                since_improvement = 0;
            } else if (++since_improvement >= caps.stagnation_window) {
                out.iterations_used = it;
                out.cls = OutcomeClass::kResidualStuck;
                return out;
            }
        }
        decoder.run_cycle(error, syndrome, rng);
    }
}

struct FailureStats {
    long long n_restored = 0;
    long long n_res = 0;
    long long n_log = 0;

    void record(const ConvergenceOutcome &o) {
        switch (o.cls) {
            case OutcomeClass::kRestored:
                n_restored++;
                break;
            case OutcomeClass::kLogicalFailure:
                n_log++;
                break;
            case OutcomeClass::kResidualStuck:
                n_res++;
                break;
        }
    }
    FailureStats &operator+=(const FailureStats &o) {
        n_restored += o.n_restored;
        n_res += o.n_res;
        n_log += o.n_log;
        return *this;
    }
    /// N_res / N_log; only defined when N_log > 0.
    double ratio() const {
        if (n_log <= 0) {
            throw std::domain_error("N_res/N_log is undefined without logical failures.");
        }
        return static_cast<double>(n_res) / static_cast<double>(n_log);
    }
};

inline FailureStats record_outcome(FailureStats stats, const ConvergenceOutcome &outcome) {
    stats.record(outcome);
    return stats;
}

}  // namespace toric
