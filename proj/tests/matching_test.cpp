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

#include "toric/matching.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "toric/noise.hpp"

using namespace toric;

namespace {

DefectSet random_defects(TrialRng &rng, int L, int n) {
    DefectSet d;
    while (static_cast<int>(d.size()) < n) {
        Coord2 c{static_cast<int>(rng.below(L)), static_cast<int>(rng.below(L))};
        if (std::find(d.begin(), d.end(), c) == d.end()) {
            d.push_back(c);
        }
    }
    return d;
}

// The 5x5 configuration with defects (0,0), (1,2), (2,2), (3,0).
Chain footnote_error(const Torus2D &t) {
    Chain e = t.zero_chain(1);
    e.flip(planar::v_edge(t, 0, 0));
    e.flip(planar::v_edge(t, 0, 1));
    e.flip(planar::h_edge(t, 0, 2));
    e.flip(planar::h_edge(t, 2, 2));
    e.flip(planar::v_edge(t, 3, 1));
    e.flip(planar::v_edge(t, 3, 0));
    return e;
}

// Same pairing, paths routed y first then x.
Chain y_then_x(const Torus2D &t, const DefectSet &d, const Pairing &p) {
    const int L = t.L();
    Chain out = t.zero_chain(1);
    auto step = [L](int from, int to) {
        int fwd = ((to - from) % L + L) % L;
        return fwd <= L - fwd ? std::pair{1, fwd} : std::pair{-1, L - fwd};
    };
    for (auto [i, j] : p.pairs) {
        int x = d[i].x;
        int y = d[i].y;
        auto [sy, ny] = step(y, d[j].y);
        for (int k = 0; k < ny; k++) {
            int lo = sy > 0 ? y : (y - 1 + L) % L;
            out.flip(planar::v_edge(t, x, lo));
            y = (y + sy + L) % L;
        }
        auto [sx, nx] = step(x, d[j].x);
        for (int k = 0; k < nx; k++) {
            int lo = sx > 0 ? x : (x - 1 + L) % L;
            out.flip(planar::h_edge(t, lo, y));
            x = (x + sx + L) % L;
        }
    }
    return out;
}

}  // namespace

TEST(Matching, TorusWeightMatchesEnumeration) {
    TrialRng rng(1, 11);
    for (int rep = 0; rep < 2000; rep++) {
        const int L = 3 + static_cast<int>(rng.below(8));
        const int n = 2 * (1 + static_cast<int>(rng.below(5)));
        if (n > L * L) {
            continue;
        }
        DefectSet d = random_defects(rng, L, n);
        auto inst = MatchingInstance::torus(d, L);
        Pairing p = mwm(inst);
        ASSERT_TRUE(oracle::is_perfect(inst, p));
        ASSERT_NEAR(oracle::pairing_weight(inst, p), p.total_weight, 1e-9);
        ASSERT_NEAR(p.total_weight, oracle::matching_weight(inst), 1e-9) << "L=" << L << " n=" << n;
    }
}

TEST(Matching, EuclideanWeightMatchesEnumeration) {
    TrialRng rng(2, 12);
    for (int rep = 0; rep < 300; rep++) {
        const int n = 2 * (1 + static_cast<int>(rng.below(5)));
        std::vector<std::array<int, 4>> pts;
        for (int i = 0; i < n; i++) {
            pts.push_back({static_cast<int>(rng.below(4)), static_cast<int>(rng.below(4)),
                           static_cast<int>(rng.below(4)), static_cast<int>(rng.below(4))});
        }
        auto inst = MatchingInstance::euclidean<4>(pts);
        Pairing p = mwm(inst);
        ASSERT_TRUE(oracle::is_perfect(inst, p));
        ASSERT_NEAR(p.total_weight, oracle::matching_weight(inst), 1e-9);
    }
}

TEST(Matching, BlossomAgreesWithSubsetDp) {
    TrialRng rng(3, 13);
    for (int rep = 0; rep < 300; rep++) {
        const int L = 6 + static_cast<int>(rng.below(10));
        const int n = 2 * (3 + static_cast<int>(rng.below(6)));
        DefectSet d = random_defects(rng, L, n);
        auto inst = MatchingInstance::torus(d, L);
        Pairing a = mwm(inst, MatchingEngine::kBlossom);
        Pairing b = mwm(inst, MatchingEngine::kSubsetDp);
        ASSERT_TRUE(oracle::is_perfect(inst, a));
        ASSERT_NEAR(a.total_weight, b.total_weight, 1e-9);
    }
}

TEST(Matching, LargeInstancesArePerfect) {
    TrialRng rng(4, 14);
    for (int rep = 0; rep < 20; rep++) {
        DefectSet d = random_defects(rng, 40, 60);
        auto inst = MatchingInstance::torus(d, 40);
        Pairing p = mwm(inst);
        EXPECT_TRUE(oracle::is_perfect(inst, p));
        EXPECT_NEAR(oracle::pairing_weight(inst, p), p.total_weight, 1e-9);
    }
}

TEST(Matching, TieBreakIsDeterministicAndLexSmallest) {
    // Four corners of a square: two optimal pairings of weight 2.
    DefectSet d{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    Pairing p = mwm_torus(d, 6);
    ASSERT_EQ(p.pairs.size(), 2u);
    EXPECT_EQ(p.pairs[0], (std::pair<int, int>{0, 1}));
    EXPECT_EQ(p.pairs[1], (std::pair<int, int>{2, 3}));
    EXPECT_EQ(mwm_torus(d, 6, MatchingEngine::kBlossom).total_weight, 2.0);
}

TEST(Matching, OddDefectCountIsRejected) {
    DefectSet d{{0, 0}, {1, 0}, {0, 1}};
    EXPECT_THROW(mwm_torus(d, 5), std::invalid_argument);
}

TEST(Matching, TorusDistanceIsTranslationInvariant) {
    TrialRng rng(5, 15);
    for (int rep = 0; rep < 200; rep++) {
        const int L = 7;
        DefectSet d = random_defects(rng, L, 6);
        const int sx = static_cast<int>(rng.below(L));
        const int sy = static_cast<int>(rng.below(L));
        DefectSet moved;
        for (auto c : d) {
            moved.push_back({(c.x + sx) % L, (c.y + sy) % L});
        }
        EXPECT_DOUBLE_EQ(mwm_torus(d, L).total_weight, mwm_torus(moved, L).total_weight);
    }
}

TEST(Matching, CorrectionClearsDefects) {
    TrialRng rng(6, 16);
    Torus2D t(9);
    for (int rep = 0; rep < 200; rep++) {
        Chain e = t.zero_chain(1);
        flip_bernoulli(e, 0.05, rng);
        DefectSet d = defects_of(t, t.syndrome_of(e));
        Chain r = correction_from_pairing(t, d, mwm_torus(d, 9));
        EXPECT_TRUE(t.syndrome_of(e ^ r).empty());
    }
}

TEST(Matching, HomologyDoesNotDependOnPathShape) {
    TrialRng rng(7, 17);
    Torus2D t(7);
    for (int rep = 0; rep < 500; rep++) {
        Chain e = t.zero_chain(1);
        flip_bernoulli(e, 0.08, rng);
        DefectSet d = defects_of(t, t.syndrome_of(e));
        Pairing p = mwm_torus(d, 7);
        Chain a = e ^ correction_from_pairing(t, d, p);
        Chain b = e ^ y_then_x(t, d, p);
        ASSERT_TRUE(t.syndrome_of(b).empty());
        EXPECT_EQ(t.homology_class(a), t.homology_class(b));
    }
}

TEST(RoughTest, EmptyErrorPasses) {
    Torus2D t(5);
    EXPECT_TRUE(rough_test(t, t.zero_chain(1)));
}

TEST(RoughTest, ThreeOddColumnsFailTheTest) {
    Torus2D t(5);
    Chain e = t.zero_chain(1);
    for (int x = 0; x < 5; x++) {
        e.flip(planar::h_edge(t, x, 1));
    }
    for (int c : {0, 2, 4}) {
        e.flip(planar::v_edge(t, c, 3));
    }
    EXPECT_EQ(oracle::odd_rows_columns(t, e), (std::array<int, 2>{1, 3}));
    EXPECT_FALSE(rough_test(t, e));
}

TEST(RoughTest, InequalityIsStrict) {
    // Two odd columns at L=4 is exactly L/2 and must pass.
    Torus2D t(4);
    Chain e = t.zero_chain(1);
    e.flip(planar::v_edge(t, 0, 0));
    e.flip(planar::v_edge(t, 1, 0));
    EXPECT_TRUE(rough_test(t, e));
    e.flip(planar::v_edge(t, 2, 0));
    EXPECT_FALSE(rough_test(t, e));
}

TEST(RoughTest, AgreesWithDirectParityCount) {
    TrialRng rng(8, 18);
    for (int L : {4, 5, 7}) {
        Torus2D t(L);
        for (int rep = 0; rep < 300; rep++) {
            Chain e = t.zero_chain(1);
            flip_bernoulli(e, 0.3, rng);
            auto rc = oracle::odd_rows_columns(t, e);
            bool expect = !(2 * rc[0] > L || 2 * rc[1] > L);
            EXPECT_EQ(rough_test(t, e), expect);
        }
    }
}

TEST(RoughTest, FootnoteCounterexample) {
    Torus2D t(5);
    Chain e = footnote_error(t);
    DefectSet d = defects_of(t, t.syndrome_of(e));
    DefectSet want{{0, 0}, {3, 0}, {1, 2}, {2, 2}};
    ASSERT_EQ(d.size(), 4u);
    for (auto c : want) {
        EXPECT_NE(std::find(d.begin(), d.end(), c), d.end());
    }
    EXPECT_EQ(oracle::odd_rows_columns(t, e), (std::array<int, 2>{0, 0}));
    EXPECT_TRUE(rough_test(t, e));
    EXPECT_TRUE(logical_failure_2d(t, e, false));
    EXPECT_FALSE(logical_failure_2d(t, e, true));
}

TEST(LogicalFailure, SingleEdgeIsHarmless) {
    Torus2D t(5);
    for (std::size_t i = 0; i < t.cell_count(1); i++) {
        Chain e = t.zero_chain(1);
        e.flip(i);
        EXPECT_FALSE(logical_failure_2d(t, e, false));
    }
}

TEST(LogicalFailure, FullRowFails) {
    Torus2D t(5);
    Chain e = t.zero_chain(1);
    for (int x = 0; x < 5; x++) {
        e.flip(planar::h_edge(t, x, 3));
    }
    EXPECT_TRUE(logical_failure_2d(t, e, false));
}

TEST(LogicalFailure, PreselectionRarelyMissesFailuresAtLowNoise) {
    // Fraction of samples where the rough test passes but matching declares failure.
    TrialRng rng(9, 19);
    for (int L : {5, 7}) {
        Torus2D t(L);
        int missed = 0;
        const int n = 20000;
        for (int rep = 0; rep < n; rep++) {
            Chain e = t.zero_chain(1);
            flip_bernoulli(e, 0.01, rng);
            if (rough_test(t, e) && logical_failure_2d(t, e, false)) {
                missed++;
            }
        }
        EXPECT_LT(static_cast<double>(missed) / n, 1e-3) << "L=" << L;
    }
}

TEST(LogicalFailure, ShortLogicalErrorsSlipPastTheRoughTest) {
    // Three errors along one row of L=5: matching completes the row the wrong way,
    // yet only one row has odd parity.
    Torus2D t(5);
    Chain e = t.zero_chain(1);
    for (int x = 0; x < 3; x++) {
        e.flip(planar::h_edge(t, x, 2));
    }
    EXPECT_TRUE(rough_test(t, e));
    EXPECT_TRUE(logical_failure_2d(t, e, false));
    EXPECT_FALSE(logical_failure_2d(t, e, true));
}
