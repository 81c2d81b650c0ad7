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
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "toric/blossom.hpp"
#include "toric/lattice.hpp"

namespace toric {

struct Coord2 {
    int x = 0;
    int y = 0;
    bool operator==(const Coord2 &) const = default;
};

using DefectSet = std::vector<Coord2>;

struct Pairing {
    std::vector<std::pair<int, int>> pairs;  // indices into the defect list, first < second
    double total_weight = 0;
};

inline int torus_distance_1d(int a, int b, int L) {
    int d = std::abs(a - b) % L;
    return std::min(d, L - d);
}

inline int torus_taxicab(const Coord2 &a, const Coord2 &b, int L) {
    return torus_distance_1d(a.x, b.x, L) + torus_distance_1d(a.y, b.y, L);
}

/// Dense symmetric weight matrix for a matching instance.
struct MatchingInstance {
    int n = 0;
    std::vector<double> weight;  // n*n, row-major

    double operator()(int i, int j) const {
        return weight[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
    }

    static MatchingInstance torus(const DefectSet &defects, int L) {
        MatchingInstance m;
        m.n = static_cast<int>(defects.size());
        m.weight.assign(static_cast<std::size_t>(m.n) * static_cast<std::size_t>(m.n), 0.0);
        for (int i = 0; i < m.n; i++) {
            for (int j = 0; j < m.n; j++) {
                m.weight[static_cast<std::size_t>(i * m.n + j)] = torus_taxicab(defects[i], defects[j], L);
            }
        }
        return m;
    }

    template <std::size_t K>
    static MatchingInstance euclidean(const std::vector<std::array<int, K>> &points) {
        MatchingInstance m;
        m.n = static_cast<int>(points.size());
        m.weight.assign(static_cast<std::size_t>(m.n) * static_cast<std::size_t>(m.n), 0.0);
        for (int i = 0; i < m.n; i++) {
            for (int j = 0; j < m.n; j++) {
                double s = 0;
                for (std::size_t d = 0; d < K; d++) {
                    double t = points[i][d] - points[j][d];
                    s += t * t;
                }
                m.weight[static_cast<std::size_t>(i * m.n + j)] = std::sqrt(s);
            }
        }
        return m;
    }
};

enum class MatchingEngine { kAuto, kSubsetDp, kBlossom };

namespace detail {

constexpr double kTieTolerance = 1e-9;
constexpr int kMaxDpVertices = 18;

inline Pairing match_subset_dp(const MatchingInstance &inst) {
    const int n = inst.n;
    Pairing out;
    if (n == 0) {
        return out;
    }
    const std::uint32_t full = (n == 32) ? 0xFFFFFFFFu : ((1u << n) - 1);
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> memo(static_cast<std::size_t>(full) + 1, -1.0);
    memo[0] = 0;
    // Iterative evaluation in increasing mask order: every submask reached from
    // `mask` by removing its lowest vertex and a partner is numerically smaller.
    for (std::uint32_t mask = 1; mask <= full; mask++) {
        if (__builtin_popcount(mask) & 1) {
            continue;
        }
        int low = __builtin_ctz(mask);
        std::uint32_t rest = mask & ~(1u << low);
        double best = inf;
        for (std::uint32_t r = rest; r; r &= r - 1) {
            int j = __builtin_ctz(r);
            double c = inst(low, j) + memo[rest & ~(1u << j)];
            if (c < best) {
                best = c;
            }
        }
        memo[mask] = best;
    }
    out.total_weight = memo[full];
    std::uint32_t mask = full;
    while (mask) {
        int low = __builtin_ctz(mask);
        std::uint32_t rest = mask & ~(1u << low);
        double target = memo[mask];
        for (std::uint32_t r = rest; r; r &= r - 1) {
            int j = __builtin_ctz(r);
            double c = inst(low, j) + memo[rest & ~(1u << j)];
            if (c <= target + kTieTolerance * (1 + std::abs(target))) {
                out.pairs.emplace_back(low, j);
                mask = rest & ~(1u << j);
                break;
            }
        }
    }
    return out;
}

inline Pairing match_blossom(const MatchingInstance &inst) {
    const int n = inst.n;
    Pairing out;
    if (n == 0) {
        return out;
    }
    constexpr double kScale = 1 << 20;
    std::int64_t max_w = 0;
    std::vector<std::int64_t> scaled(inst.weight.size());
    for (std::size_t i = 0; i < inst.weight.size(); i++) {
        scaled[i] = std::llround(inst.weight[i] * kScale);
        max_w = std::max(max_w, scaled[i]);
    }
    // Every perfect matching has n/2 edges, so maximizing (offset - w) over
    // maximum-cardinality matchings minimizes the original weight.
    const std::int64_t offset = max_w + 1;
    std::vector<WeightedEdge> edges;
    edges.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
    for (int i = 0; i < n; i++) {
        for (int j = i + 1; j < n; j++) {
            edges.push_back({i, j, offset - scaled[static_cast<std::size_t>(i * n + j)]});
        }
    }
    std::vector<int> mate = BlossomMatcher(n, std::move(edges), true).solve();
    for (int i = 0; i < n; i++) {
        int j = mate[static_cast<std::size_t>(i)];
        if (j < 0) {
            throw std::runtime_error("Blossom matching returned an imperfect matching.");
        }
        if (i < j) {
            out.pairs.emplace_back(i, j);
            out.total_weight += inst(i, j);
        }
    }
    return out;
}

}  // namespace detail

/// Exact minimum-weight perfect matching.
///
/// For up to 18 vertices the subset dynamic program is used, which also returns the
/// lexicographically smallest pair list among optimal matchings. Larger instances use
/// Edmonds' blossom algorithm (deterministic, but without the lexicographic tie-break).
inline Pairing mwm(const MatchingInstance &inst, MatchingEngine engine = MatchingEngine::kAuto) {
    if (inst.n % 2 != 0) {
        throw std::invalid_argument("mwm: odd number of vertices (" + std::to_string(inst.n) + ").");
    }
    if (engine == MatchingEngine::kAuto) {
        engine = inst.n <= detail::kMaxDpVertices ? MatchingEngine::kSubsetDp : MatchingEngine::kBlossom;
    }
    if (engine == MatchingEngine::kSubsetDp) {
        if (inst.n > 24) {
            throw std::invalid_argument("mwm: subset DP limited to 24 vertices.");
        }
        return detail::match_subset_dp(inst);
    }
    return detail::match_blossom(inst);
}

inline Pairing mwm_torus(const DefectSet &defects, int L, MatchingEngine engine = MatchingEngine::kAuto) {
    return mwm(MatchingInstance::torus(defects, L), engine);
}

/// Harrington's rough test. Row r holds the L horizontal edges at height r, column c
/// the L vertical edges at abscissa c. Returns true (pass) unless more than L/2 rows
/// or more than L/2 columns have odd parity.
inline bool rough_test(const Torus2D &torus, const Chain &error) {
    const int L = torus.L();
    int odd_rows = 0;
    int odd_cols = 0;
    for (int r = 0; r < L; r++) {
        int parity = 0;
        for (int x = 0; x < L; x++) {
            parity ^= error.bits[planar::h_edge(torus, x, r)];
        }
        odd_rows += parity;
    }
    for (int c = 0; c < L; c++) {
        int parity = 0;
        for (int y = 0; y < L; y++) {
            parity ^= error.bits[planar::v_edge(torus, c, y)];
        }
        odd_cols += parity;
    }
    return !(2 * odd_rows > L || 2 * odd_cols > L);
}

/// Flips the shortest straight run of edges along one axis from coordinate a to b.
/// Ties at distance L/2 go in the positive direction.
inline void flip_straight_run(const Torus2D &torus, Chain &out, int fixed, int from, int to, bool horizontal) {
    const int L = torus.L();
    int fwd = ((to - from) % L + L) % L;
    int step = 1;
    int len = fwd;
    if (L - fwd < fwd) {
        step = -1;
        len = L - fwd;
    }
    int c = from;
    for (int i = 0; i < len; i++) {
        int base = step > 0 ? c : torus.wrap(c - 1);
        if (horizontal) {
            out.flip(planar::h_edge(torus, base, fixed));
        } else {
            out.flip(planar::v_edge(torus, fixed, base));
        }
        c = torus.wrap(c + step);
    }
}

/// Realizes a pairing as qubit flips: for each pair an x-run at the first defect's
/// height, then a y-run at the second defect's abscissa.
inline Chain correction_from_pairing(const Torus2D &torus, const DefectSet &defects, const Pairing &pairing) {
    Chain out = torus.zero_chain(1);
    for (auto [i, j] : pairing.pairs) {
        const Coord2 &a = defects[static_cast<std::size_t>(i)];
        const Coord2 &b = defects[static_cast<std::size_t>(j)];
        flip_straight_run(torus, out, a.y, a.x, b.x, true);
        flip_straight_run(torus, out, b.x, a.y, b.y, false);
    }
    return out;
}

inline DefectSet defects_of(const Torus2D &torus, const Chain &vertex_chain) {
    DefectSet out;
    for (auto v : vertex_chain.support()) {
        auto c = torus.site_coords(v);
        out.push_back({c[0], c[1]});
    }
    return out;
}

/// Perfect-knowledge failure test: would minimum-weight matching on the exact defects
/// of `error` leave a homologically non-trivial cycle? With preselection the matching
/// only runs when the rough test fails.
inline bool logical_failure_2d(const Torus2D &torus, const Chain &error, bool preselect = true) {
    if (preselect && rough_test(torus, error)) {
        return false;
    }
    DefectSet defects = defects_of(torus, torus.syndrome_of(error));
    Pairing pairing = mwm_torus(defects, torus.L());
    Chain residual = error ^ correction_from_pairing(torus, defects, pairing);
    return Torus2D::any_bit(torus.homology_class(residual));
}

}  // namespace toric
