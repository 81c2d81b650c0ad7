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

#include "toric/decoders4d.hpp"

#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "toric/failure4d.hpp"
#include "toric/noise.hpp"

using namespace toric;

TEST(HastingsConfig, Validation) {
    EXPECT_NO_THROW((HastingsConfig{3, 5}.validate(8)));
    EXPECT_THROW((HastingsConfig{3, 5}.validate(3)), std::invalid_argument);
    EXPECT_THROW((HastingsConfig{1, 5}.validate(8)), std::invalid_argument);
    EXPECT_THROW((HastingsConfig{3, 0}.validate(8)), std::invalid_argument);
}

TEST(SweepGeometry, SubsetsShareNoEdge) {
    for (int L : {4, 5, 6}) {
        Torus4D t(L);
        SweepGeometry geo(t);
        EXPECT_EQ(geo.colour_count(), L % 2 == 0 ? 2 : 3);
        std::size_t covered = 0;
        for (int r = 0; r < 6; r++) {
            for (int c = 0; c < geo.colour_count(); c++) {
                std::set<std::uint32_t> edges;
                for (auto f : geo.subset(r, c)) {
                    for (auto e : geo.edges(f)) {
                        ASSERT_TRUE(edges.insert(e).second) << "L=" << L << " rank " << r << " colour " << c;
                    }
                }
                covered += geo.subset(r, c).size();
            }
        }
        EXPECT_EQ(covered, t.cell_count(2));
    }
}

TEST(SweepGeometry, NorthAndEastAreBoundaryEdges) {
    Torus4D t(4);
    SweepGeometry geo(t);
    for (std::size_t f = 0; f < t.cell_count(2); f++) {
        auto b = t.boundary_of(2, f);
        std::set<std::uint32_t> bs(b.begin(), b.end());
        ASSERT_TRUE(bs.count(geo.north(f)));
        ASSERT_TRUE(bs.count(geo.east(f)));
        ASSERT_NE(geo.north(f), geo.east(f));
    }
}

TEST(Toom, SingleFaceRemovedInOneSweep) {
    Torus4D t(4);
    SweepGeometry geo(t);
    for (std::size_t f = 0; f < t.cell_count(2); f++) {
        Chain e = t.zero_chain(2);
        e.flip(f);
        Chain s = t.syndrome_of(e);
        Chain flips = toom_sweep(geo, s, 1);
        ASSERT_TRUE(s.empty());
        ASSERT_EQ(flips, e);
    }
}

TEST(Toom, IsDeterministic) {
    Torus4D t(5);
    SweepGeometry geo(t);
    TrialRng rng(1, 1);
    Chain e = t.zero_chain(2);
    flip_bernoulli(e, 0.05, rng);
    Chain s1 = t.syndrome_of(e);
    Chain s2 = s1;
    EXPECT_EQ(toom_sweep(geo, s1, 2), toom_sweep(geo, s2, 2));
}

TEST(Toom, FullColumnIsInvariant) {
    for (int L : {6, 7}) {
        Torus4D t(L);
        SweepGeometry geo(t);
        Chain s = t.syndrome_of(oracle::strip_4d(t, 2, 1));
        const Chain s0 = s;
        for (int i = 0; i < 100; i++) {
            ASSERT_TRUE(toom_sweep(geo, s, 1).empty());
        }
        EXPECT_EQ(s, s0);
    }
}

TEST(Dklp, WidthTwoStripIsStuck) {
    for (int L : {6, 7, 8}) {
        Torus4D t(L);
        SweepGeometry geo(t);
        Chain s = t.syndrome_of(oracle::strip_4d(t, 1, 2));
        const Chain s0 = s;
        TrialRng rng(2, static_cast<std::uint64_t>(L));
        for (int i = 0; i < 100; i++) {
            ASSERT_TRUE(dklp_sweep(geo, s, 1, rng).empty());
        }
        EXPECT_EQ(s, s0);
    }
}

TEST(Dklp, SubsetUpdateNeverRaisesSyndromeWeight) {
    Torus4D t(4);
    SweepGeometry geo(t);
    TrialRng rng(5, 5);
    for (int it = 0; it < 5000; it++) {
        Chain e = t.zero_chain(2);
        flip_bernoulli(e, 0.1 + 0.3 * rng.uniform(), rng);
        Chain s = t.syndrome_of(e);
        Chain m = t.zero_chain(1);
        flip_bernoulli(m, 0.05, rng);
        s ^= m;
        const int rank = static_cast<int>(rng.below(6));
        const int colour = static_cast<int>(rng.below(static_cast<std::uint64_t>(geo.colour_count())));
        const std::size_t before = s.weight();
        Chain flips = t.zero_chain(2);
        dklp_update_subset(geo, geo.subset(rank, colour), flips, s, rng);
        ASSERT_LE(s.weight(), before);
    }
}

TEST(Dklp, VoteProbabilities) {
    // A face with exactly two defects flips about half the time.
    Torus4D t(4);
    SweepGeometry geo(t);
    const std::uint32_t f = geo.subset(0, 0).front();
    int flipped = 0;
    const int n = 4000;
    TrialRng rng(6, 6);
    for (int i = 0; i < n; i++) {
        Chain s = t.zero_chain(1);
        s.flip(geo.edges(f)[0]);
        s.flip(geo.edges(f)[1]);
        Chain flips = t.zero_chain(2);
        dklp_update_subset(geo, {f}, flips, s, rng);
        flipped += flips[f];
    }
    EXPECT_NEAR(static_cast<double>(flipped) / n, 0.5, 0.04);
    Chain s = t.zero_chain(1);
    for (int k = 0; k < 3; k++) {
        s.flip(geo.edges(f)[static_cast<std::size_t>(k)]);
    }
    Chain flips = t.zero_chain(2);
    dklp_update_subset(geo, {f}, flips, s, rng);
    EXPECT_TRUE(flips[f]);
}

TEST(Hastings, WidthLStripGetsNoCorrection) {
    for (int L : {8, 9}) {
        Torus4D t(L);
        Decoder4D d(t, DecoderKind::kHastings, HastingsConfig{3, 5}, SweepConfig{});
        for (int seed = 0; seed < 10; seed++) {
            Chain e = oracle::strip_4d(t, seed % L, 3);
            Chain s = t.syndrome_of(e);
            TrialRng rng(static_cast<std::uint64_t>(seed), 9);
            EXPECT_TRUE(d.run_cycle(e, s, rng).empty()) << "L=" << L << " seed " << seed;
        }
    }
}

TEST(Hastings, PerfectSyndromeCyclesClearSparseErrors) {
    // The boxes cover only part of the lattice per round, so allow several cycles.
    Torus4D t(8);
    HastingsDecoder h(t, HastingsConfig{3, 5});
    TrialRng rng(7, 7);
    for (int rep = 0; rep < 10; rep++) {
        Chain e = t.zero_chain(2);
        flip_bernoulli(e, 0.001, rng);
        for (int cycle = 0; cycle < 30 && !t.syndrome_of(e).empty(); cycle++) {
            h.run_cycle(e, t.syndrome_of(e), rng);
        }
        EXPECT_TRUE(t.syndrome_of(e).empty());
        EXPECT_FALSE(Torus4D::any_bit(t.homology_class(e)));
    }
}

TEST(Hastings, BoxDecodeClosesLoops) {
    BoxComplex cx(3);
    TrialRng rng(8, 8);
    for (int rep = 0; rep < 50; rep++) {
        std::vector<std::uint8_t> s(static_cast<std::size_t>(cx.edge_count()), 0);
        for (int k = 0; k < 4; k++) {
            s[rng.below(static_cast<std::uint64_t>(cx.edge_count()))] ^= 1;
        }
        BoxDecodeState st = decode_box(cx, s, rng, 20000);
        EXPECT_EQ(st.intersection_vertices.size() % 2, 0u);
        EXPECT_EQ(oracle::box_boundary(cx, st.correction), st.closed_loops);
        for (std::size_t e = 0; e < s.size(); e++) {
            EXPECT_EQ(st.closed_loops[e], s[e] ^ st.matching_strings[e]);
        }
    }
}

TEST(Decoder4D, SingleFaceRestoredByEveryDecoder) {
    Torus4D t(8);
    for (DecoderKind k : {DecoderKind::kHastings, DecoderKind::kToom, DecoderKind::kDklp}) {
        Decoder4D d(t, k, HastingsConfig{3, 5}, SweepConfig{});
        for (std::size_t f = 0; f < t.cell_count(2); f += 37) {
            Chain e = t.zero_chain(2);
            e.flip(f);
            TrialRng rng(f, 1);
            auto o = converge_perfect(t, d, e, rng);
            EXPECT_EQ(o.cls, OutcomeClass::kRestored) << decoder_name(k) << " face " << f;
        }
    }
}

TEST(Decoder4D, RejectsHarrington) {
    Torus4D t(4);
    EXPECT_THROW(Decoder4D(t, DecoderKind::kHarrington, {}, {}), std::invalid_argument);
}
