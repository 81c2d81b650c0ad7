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

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "toric/box.hpp"
#include "toric/lattice.hpp"
#include "toric/matching.hpp"
#include "toric/rng.hpp"

namespace toric {

struct HastingsConfig {
    int l = 3;
    int m = 5;
    /// Branch-and-bound nodes per surface component before settling for the best found.
    std::uint64_t surface_node_budget = 20000;

    void validate(int L) const {
        if (l < 2) {
            throw std::invalid_argument("Hastings box side l must be >= 2, got " + std::to_string(l) + ".");
        }
        if (m < 1) {
            throw std::invalid_argument("Hastings rounds m must be >= 1, got " + std::to_string(m) + ".");
        }
        if (L / (l + 1) < 1) {
            throw std::invalid_argument("no Hastings box of side l=" + std::to_string(l) + " fits in L=" +
                                        std::to_string(L) + " (need l+1 <= L).");
        }
    }
};

/// Working set of one box decode, in local box ids.
struct BoxDecodeState {
    std::vector<std::uint8_t> restricted_syndrome;  // S|_N
    std::vector<int> intersection_vertices;         // V
    std::vector<std::uint8_t> matching_strings;     // S'
    std::vector<std::uint8_t> closed_loops;         // S_correct = S' + S|_N
    std::vector<int> correction;                    // R, sorted local faces
    bool correction_optimal = true;                 // the surface search completed
};

/// Decodes a single box given its restricted syndrome.
inline BoxDecodeState decode_box(const BoxComplex &cx, std::vector<std::uint8_t> restricted, TrialRng &rng,
                                 std::uint64_t surface_node_budget = 0) {
    BoxDecodeState st;
    st.restricted_syndrome = std::move(restricted);
    st.intersection_vertices = box_intersection_vertices(cx, st.restricted_syndrome);
    st.matching_strings.assign(static_cast<std::size_t>(cx.edge_count()), 0);
    const auto &V = st.intersection_vertices;
    if (!V.empty()) {
        std::vector<std::array<int, 4>> pts;
        pts.reserve(V.size());
        for (int v : V) {
            pts.push_back(cx.coords(v));
        }
        Pairing pairing = mwm(MatchingInstance::euclidean<4>(pts));
        for (auto [i, j] : pairing.pairs) {
            for (int e : least_deviating_path(cx, V[static_cast<std::size_t>(i)], V[static_cast<std::size_t>(j)], rng)) {
                st.matching_strings[static_cast<std::size_t>(e)] ^= 1;
            }
        }
    }
    st.closed_loops = st.matching_strings;
    for (std::size_t e = 0; e < st.closed_loops.size(); e++) {
        st.closed_loops[e] ^= st.restricted_syndrome[e];
    }
    MinSurfaceResult surface = min_surface_search(cx, st.closed_loops, MinSurfaceOptions{surface_node_budget});
    st.correction = std::move(surface.faces);
    st.correction_optimal = surface.optimal;
    return st;
}

/// Hastings' box decoder on the 4D torus.
class HastingsDecoder {
   public:
    HastingsDecoder(const Torus4D &torus, HastingsConfig config) : torus_(&torus), config_(config), box_(config.l) {
        config_.validate(torus.L());
    }

    const HastingsConfig &config() const {
        return config_;
    }
    const BoxComplex &box_complex() const {
        return box_;
    }

    /// One round with a given grid offset. Returns the round's correction and updates
    /// `syndrome` (the effective syndrome) by its boundary.
    Chain round(Chain &syndrome, const Coord4 &offset, TrialRng &rng) const {
        Chain correction = torus_->zero_chain(2);
        for (const Box &box : partition_boxes(torus_->L(), config_.l, offset)) {
            BoxEmbedding emb(*torus_, box_, box);
            std::vector<std::uint8_t> restricted(static_cast<std::size_t>(box_.edge_count()), 0);
            bool any = false;
            for (int e = 0; e < box_.edge_count(); e++) {
                if (syndrome.bits[emb.edge(e)]) {
                    restricted[static_cast<std::size_t>(e)] = 1;
                    any = true;
                }
            }
            if (!any) {
                continue;
            }
            BoxDecodeState st = decode_box(box_, std::move(restricted), rng, config_.surface_node_budget);
            for (int f : st.correction) {
                correction.bits[emb.face(f)] ^= 1;
            }
        }
        syndrome ^= torus_->syndrome_of(correction);
        return correction;
    }

    /// m rounds with random offsets; flips are applied to `error` and the total
    /// correction is returned.
    Chain run_cycle(Chain &error, const Chain &measured, TrialRng &rng) const {
        Chain syndrome = measured;
        Chain total = torus_->zero_chain(2);
        const int L = torus_->L();
        for (int r = 0; r < config_.m; r++) {
            Coord4 offset{};
            for (auto &o : offset) {
                o = static_cast<int>(rng.below(static_cast<std::uint64_t>(L)));
            }
            total ^= round(syndrome, offset, rng);
        }
        error ^= total;
        return total;
    }

   private:
    const Torus4D *torus_;
    HastingsConfig config_;
    BoxComplex box_;
};

enum class SweepRule { kToom, kDklp };

struct SweepConfig {
    SweepRule rule = SweepRule::kToom;
    int repeats_per_plane = 1;

    void validate() const {
        if (repeats_per_plane < 1) {
            throw std::invalid_argument("repeats_per_plane must be >= 1.");
        }
    }
};

/// Per-face lookup tables for the plane-by-plane sweep rules.
class SweepGeometry {
   public:
    explicit SweepGeometry(const Torus4D &torus) : torus_(&torus) {
        const int L = torus.L();
        const std::size_t nf = torus.cell_count(2);
        north_.resize(nf);
        east_.resize(nf);
        edges_.resize(nf);
        colour_count_ = (L % 2 == 0) ? 2 : 3;
        for (int r = 0; r < 6; r++) {
            for (int c = 0; c < colour_count_; c++) {
                groups_[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].clear();
            }
            all_[static_cast<std::size_t>(r)].clear();
        }
        for (std::size_t f = 0; f < nf; f++) {
            const std::size_t site = torus.cell_site(2, f);
            const unsigned mask = torus.cell_orientation(2, f);
            const int mu = __builtin_ctz(mask);
            const int nu = 31 - __builtin_clz(mask);
            const int rank = torus.orientation_rank(mask);
            // North is the mu-edge displaced along nu, east the nu-edge displaced along mu,
            // so they meet at the corner with the largest coordinates.
            north_[f] = static_cast<std::uint32_t>(torus.cell_index(1, torus.site_shift(site, nu, 1), 1u << mu));
            east_[f] = static_cast<std::uint32_t>(torus.cell_index(1, torus.site_shift(site, mu, 1), 1u << nu));
            auto b = torus.boundary_of(2, f);
            edges_[f] = {b[0], b[1], b[2], b[3]};
            auto c = torus.site_coords(site);
            int colour;
            if (colour_count_ == 2) {
                colour = (c[static_cast<std::size_t>(mu)] + c[static_cast<std::size_t>(nu)]) % 2;
            } else {
                auto cls = [L](int x) { return x == L - 1 ? 2 : x % 2; };
                colour = (cls(c[static_cast<std::size_t>(mu)]) + cls(c[static_cast<std::size_t>(nu)])) % 3;
            }
            groups_[static_cast<std::size_t>(rank)][static_cast<std::size_t>(colour)].push_back(static_cast<std::uint32_t>(f));
            all_[static_cast<std::size_t>(rank)].push_back(static_cast<std::uint32_t>(f));
        }
    }

    const Torus4D &torus() const {
        return *torus_;
    }
    int colour_count() const {
        return colour_count_;
    }
    std::uint32_t north(std::size_t f) const {
        return north_[f];
    }
    std::uint32_t east(std::size_t f) const {
        return east_[f];
    }
    const std::array<std::uint32_t, 4> &edges(std::size_t f) const {
        return edges_[f];
    }
    /// Faces of one plane orientation (rank in xy, xz, xw, yz, yw, zw order).
    const std::vector<std::uint32_t> &group(int rank) const {
        return all_[static_cast<std::size_t>(rank)];
    }
    /// Checkerboard subset of a plane group; faces in one subset share no edge.
    const std::vector<std::uint32_t> &subset(int rank, int colour) const {
        return groups_[static_cast<std::size_t>(rank)][static_cast<std::size_t>(colour)];
    }

    int defect_count(const Chain &syndrome, std::size_t f) const {
        int n = 0;
        for (auto e : edges_[f]) {
            n += syndrome.bits[e];
        }
        return n;
    }

    void flip_face(Chain &flips, Chain &syndrome, std::uint32_t f) const {
        flips.bits[f] ^= 1;
        for (auto e : edges_[f]) {
            syndrome.bits[e] ^= 1;
        }
    }

   private:
    const Torus4D *torus_;
    std::vector<std::uint32_t> north_;
    std::vector<std::uint32_t> east_;
    std::vector<std::array<std::uint32_t, 4>> edges_;
    std::array<std::array<std::vector<std::uint32_t>, 3>, 6> groups_;
    std::array<std::vector<std::uint32_t>, 6> all_;
    int colour_count_ = 2;
};

/// Toom's north-east rule applied plane group by plane group. Updates `syndrome`
/// in place and returns the flipped faces.
inline Chain toom_sweep(const SweepGeometry &geo, Chain &syndrome, int repeats_per_plane) {
    Chain flips = geo.torus().zero_chain(2);
    std::vector<std::uint32_t> batch;
    for (int rep = 0; rep < repeats_per_plane; rep++) {
        for (int rank = 0; rank < 6; rank++) {
            batch.clear();
            for (auto f : geo.group(rank)) {
                if (syndrome.bits[geo.north(f)] && syndrome.bits[geo.east(f)]) {
                    batch.push_back(f);
                }
            }
            for (auto f : batch) {
                geo.flip_face(flips, syndrome, f);
            }
        }
    }
    return flips;
}

/// Applies the DKLP vote to one checkerboard subset against the current syndrome.
inline void dklp_update_subset(const SweepGeometry &geo, const std::vector<std::uint32_t> &subset, Chain &flips,
                               Chain &syndrome, TrialRng &rng) {
    // Faces of one subset share no edge, so sequential application equals parallel.
    for (auto f : subset) {
        int n = geo.defect_count(syndrome, f);
        if (n >= 3 || (n == 2 && rng.bernoulli(0.5))) {
            geo.flip_face(flips, syndrome, f);
        }
    }
}

inline Chain dklp_sweep(const SweepGeometry &geo, Chain &syndrome, int repeats_per_plane, TrialRng &rng) {
    Chain flips = geo.torus().zero_chain(2);
    for (int rep = 0; rep < repeats_per_plane; rep++) {
        for (int rank = 0; rank < 6; rank++) {
            for (int colour = 0; colour < geo.colour_count(); colour++) {
                dklp_update_subset(geo, geo.subset(rank, colour), flips, syndrome, rng);
            }
        }
    }
    return flips;
}

enum class DecoderKind { kHarrington, kHastings, kToom, kDklp };

inline const char *decoder_name(DecoderKind k) {
    switch (k) {
        case DecoderKind::kHarrington:
            return "harrington";
        case DecoderKind::kHastings:
            return "hastings";
        case DecoderKind::kToom:
            return "toom";
        case DecoderKind::kDklp:
            return "dklp";
    }
    return "?";
}

/// One of the three 4D decoders behind a common cycle interface.
class Decoder4D {
   public:
    Decoder4D(const Torus4D &torus, DecoderKind kind, HastingsConfig hastings, SweepConfig sweep)
        : torus_(&torus), kind_(kind), sweep_(sweep) {
        if (kind == DecoderKind::kHastings) {
            hastings_.emplace(torus, hastings);
        } else if (kind == DecoderKind::kToom || kind == DecoderKind::kDklp) {
            sweep_.rule = kind == DecoderKind::kToom ? SweepRule::kToom : SweepRule::kDklp;
            sweep_.validate();
            geometry_.emplace(torus);
        } else {
            throw std::invalid_argument("Decoder4D: decoder must be hastings, toom or dklp.");
        }
    }

    DecoderKind kind() const {
        return kind_;
    }
    bool deterministic() const {
        return kind_ == DecoderKind::kToom;
    }

    /// Decodes against a measured syndrome, applies the correction to `error` and
    /// returns it.
    Chain run_cycle(Chain &error, const Chain &measured, TrialRng &rng) const {
        if (hastings_) {
            return hastings_->run_cycle(error, measured, rng);
        }
        Chain syndrome = measured;
        Chain flips = kind_ == DecoderKind::kToom ? toom_sweep(*geometry_, syndrome, sweep_.repeats_per_plane)
                                                  : dklp_sweep(*geometry_, syndrome, sweep_.repeats_per_plane, rng);
        error ^= flips;
        return flips;
    }

   private:
    const Torus4D *torus_;
    DecoderKind kind_;
    SweepConfig sweep_;
    std::optional<HastingsDecoder> hastings_;
    std::optional<SweepGeometry> geometry_;
};

}  // namespace toric
