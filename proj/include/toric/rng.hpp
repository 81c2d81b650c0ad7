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
#include <limits>

namespace toric {

inline std::uint64_t splitmix64(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Mixes a tuple of 64-bit words into one key.
inline std::uint64_t mix_key(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0, std::uint64_t d = 0) {
    std::uint64_t s = a;
    std::uint64_t h = splitmix64(s);
    s = h ^ b;
    h = splitmix64(s);
    s = h ^ c;
    h = splitmix64(s);
    s = h ^ d;
    return splitmix64(s);
}

/// Phase tags separating the random streams used within one QEC cycle.
enum class Phase : std::uint64_t {
    kDataNoise = 1,
    kMeasurementNoise = 2,
    kDecoder = 3,
    kProbe = 4,
};

/// xoshiro256** generator whose state is derived from (seed, stream, cycle, phase).
///
/// Identical keys reproduce identical sequences regardless of which worker runs
/// the trial. Satisfies UniformRandomBitGenerator.
class TrialRng {
   public:
    using result_type = std::uint64_t;

    TrialRng() : TrialRng(0, 0) {
    }
    TrialRng(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t cycle = 0, std::uint64_t phase = 0)
        : seed_(seed), stream_(stream_id) {
        std::uint64_t sm = mix_key(seed, stream_id, cycle, phase);
        for (auto &w : s_) {
            w = splitmix64(sm);
        }
    }

    /// Independent generator for a given cycle and phase of this trial.
    TrialRng derive(std::uint64_t cycle, Phase phase) const {
        return TrialRng(seed_, stream_, cycle, static_cast<std::uint64_t>(phase));
    }

    std::uint64_t seed() const {
        return seed_;
    }
    std::uint64_t stream_id() const {
        return stream_;
    }

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Lemire's multiply-shift with rejection.
        unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>((*this)()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }
    bool bernoulli(double p) {
        if (p <= 0) {
            return false;
        }
        if (p >= 1) {
            return true;
        }
        return uniform() < p;
    }

   private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t s_[4]{};
};

}  // namespace toric
