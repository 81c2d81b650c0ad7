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

#include <cmath>
#include <stdexcept>
#include <string>

#include "toric/lattice.hpp"
#include "toric/rng.hpp"

namespace toric {

/// Phenomenological noise: data flips with probability p, check flips with probability q.
struct NoiseParams {
    double p = 0;
    double q = 0;

    void validate() const {
        if (!(p >= 0 && p <= 1)) {
            throw std::invalid_argument("p must lie in [0, 1], got " + std::to_string(p) + ".");
        }
        if (!(q >= 0 && q <= 1)) {
            throw std::invalid_argument("q must lie in [0, 1], got " + std::to_string(q) + ".");
        }
    }
};

/// XORs every bit of `chain` with an independent Bernoulli(rate) draw.
/// Uses geometric gap sampling, so the cost scales with the number of flips.
template <typename F>
void for_each_bernoulli(std::size_t n, double rate, TrialRng &rng, F &&on_hit) {
    if (rate <= 0) {
        return;
    }
    if (rate >= 1) {
        for (std::size_t i = 0; i < n; i++) {
            on_hit(i);
        }
        return;
    }
    const double log_q = std::log1p(-rate);
    std::size_t i = 0;
    while (true) {
        double u = 1.0 - rng.uniform();  // (0, 1]
        double gap = std::floor(std::log(u) / log_q);
        if (gap >= static_cast<double>(n - i)) {
            return;
        }
        i += static_cast<std::size_t>(gap);
        on_hit(i);
        i++;
        if (i >= n) {
            return;
        }
    }
}

inline void flip_bernoulli(Chain &chain, double rate, TrialRng &rng) {
    for_each_bernoulli(chain.size(), rate, rng, [&](std::size_t i) { chain.bits[i] ^= 1; });
}

/// Applies one cycle of i.i.d. Z flips to a qubit chain in place.
inline Chain &apply_data_noise(Chain &error, const NoiseParams &params, TrialRng &rng) {
    flip_bernoulli(error, params.p, rng);
    return error;
}

/// Noisy syndrome: the exact boundary of `error` followed by a bit-flip channel of rate q.
template <int D>
Chain measure_syndrome(const Torus<D> &torus, const Chain &error, const NoiseParams &params, TrialRng &rng) {
    Chain s = torus.syndrome_of(error);
    flip_bernoulli(s, params.q, rng);
    return s;
}

}  // namespace toric
