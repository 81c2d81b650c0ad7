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
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace toric {

/// Number of k-subsets of an n-set.
constexpr int binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    int r = 1;
    for (int i = 1; i <= k; i++) {
        r = r * (n - k + i) / i;
    }
    return r;
}

struct TorusDims {
    int dimension = 2;
    int L = 2;
};

/// A GF(2) chain: one bit per cell of a fixed dimension.
struct Chain {
    int cell_dim = 0;
    std::vector<std::uint8_t> bits;

    Chain() = default;
    Chain(int cell_dim, std::size_t cell_count) : cell_dim(cell_dim), bits(cell_count, 0) {
    }

    std::size_t size() const {
        return bits.size();
    }
    bool operator[](std::size_t i) const {
        return bits[i] != 0;
    }
    void flip(std::size_t i) {
        bits[i] ^= 1;
    }
    void set(std::size_t i, bool v) {
        bits[i] = v ? 1 : 0;
    }
    void clear() {
        std::fill(bits.begin(), bits.end(), 0);
    }

    Chain &operator^=(const Chain &other) {
        if (other.cell_dim != cell_dim || other.bits.size() != bits.size()) {
            throw std::invalid_argument("Chain XOR on chains of different shape.");
        }
        for (std::size_t i = 0; i < bits.size(); i++) {
            bits[i] ^= other.bits[i];
        }
        return *this;
    }
    friend Chain operator^(Chain a, const Chain &b) {
        a ^= b;
        return a;
    }
    bool operator==(const Chain &other) const = default;

    std::size_t weight() const {
        std::size_t w = 0;
        for (auto b : bits) {
            w += b;
        }
        return w;
    }
    bool empty() const {
        for (auto b : bits) {
            if (b) {
                return false;
            }
        }
        return true;
    }
    std::vector<std::uint32_t> support() const {
        std::vector<std::uint32_t> out;
        for (std::size_t i = 0; i < bits.size(); i++) {
            if (bits[i]) {
                out.push_back(static_cast<std::uint32_t>(i));
            }
        }
        return out;
    }
};

/// A cell of the cubical complex: a base vertex plus the set of directions it spans.
template <int D>
struct CellIndex {
    std::array<int, D> base{};
    unsigned orientation = 0;  // bitmask of spanned directions

    int dimension() const {
        return __builtin_popcount(orientation);
    }
    bool operator==(const CellIndex &) const = default;
};

/// Periodic D-dimensional hypercubic lattice of linear size L with its chain complex.
///
/// Cells of dimension k are indexed densely as `site * binomial(D, k) + orientation_rank`,
/// where `site` is the row-major index of the base vertex (coordinate 0 most significant)
/// and orientations are ranked in lexicographic order of their direction lists
/// (for D=4, k=2: xy, xz, xw, yz, yw, zw).
template <int D>
class Torus {
   public:
    static_assert(D >= 1 && D <= 6);
    static constexpr int dimension = D;

    explicit Torus(int L) : L_(L) {
        if (L < 2) {
            throw std::invalid_argument("Torus side length must be at least 2, got " + std::to_string(L) + ".");
        }
        sites_ = 1;
        for (int d = 0; d < D; d++) {
            sites_ *= static_cast<std::size_t>(L);
        }
        for (int k = 0; k <= D; k++) {
            masks_[k].clear();
        }
        for (unsigned m = 0; m < (1u << D); m++) {
            masks_[__builtin_popcount(m)].push_back(m);
        }
        // Lexicographic order of the sorted direction lists.
        for (int k = 0; k <= D; k++) {
            auto &ms = masks_[k];
            std::vector<std::pair<std::vector<int>, unsigned>> keyed;
            for (unsigned m : ms) {
                std::vector<int> dirs;
                for (int d = 0; d < D; d++) {
                    if (m & (1u << d)) {
                        dirs.push_back(d);
                    }
                }
                keyed.emplace_back(dirs, m);
            }
            std::sort(keyed.begin(), keyed.end());
            for (std::size_t i = 0; i < keyed.size(); i++) {
                ms[i] = keyed[i].second;
            }
        }
        rank_of_mask_.fill(-1);
        for (int k = 0; k <= D; k++) {
            for (std::size_t i = 0; i < masks_[k].size(); i++) {
                rank_of_mask_[masks_[k][i]] = static_cast<int>(i);
            }
        }
        stride_[D - 1] = 1;
        for (int d = D - 2; d >= 0; d--) {
            stride_[d] = stride_[d + 1] * static_cast<std::size_t>(L);
        }
        for (int k = 1; k <= D; k++) {
            build_boundary_table(k);
        }
        for (int k = 0; k < D; k++) {
            build_coboundary_table(k);
        }
    }

    int L() const {
        return L_;
    }
    TorusDims dims() const {
        return {D, L_};
    }
    std::size_t site_count() const {
        return sites_;
    }
    int orientation_count(int k) const {
        return binomial(D, k);
    }
    std::size_t cell_count(int k) const {
        return sites_ * static_cast<std::size_t>(binomial(D, k));
    }
    std::span<const unsigned> orientations(int k) const {
        return masks_[k];
    }
    int orientation_rank(unsigned mask) const {
        return rank_of_mask_[mask];
    }

    Chain zero_chain(int k) const {
        return Chain(k, cell_count(k));
    }

    int wrap(int c) const {
        c %= L_;
        return c < 0 ? c + L_ : c;
    }

    std::size_t site_index(const std::array<int, D> &coords) const {
        std::size_t s = 0;
        for (int d = 0; d < D; d++) {
            s += static_cast<std::size_t>(wrap(coords[d])) * stride_[d];
        }
        return s;
    }
    std::array<int, D> site_coords(std::size_t site) const {
        std::array<int, D> c{};
        for (int d = 0; d < D; d++) {
            c[d] = static_cast<int>((site / stride_[d]) % static_cast<std::size_t>(L_));
        }
        return c;
    }
    /// Site reached by moving `delta` steps along direction `dir`.
    std::size_t site_shift(std::size_t site, int dir, int delta) const {
        int c = static_cast<int>((site / stride_[dir]) % static_cast<std::size_t>(L_));
        int n = wrap(c + delta);
        return site + (static_cast<std::size_t>(n) - static_cast<std::size_t>(c)) * stride_[dir];
    }

    std::size_t index_of(const CellIndex<D> &cell) const {
        int k = cell.dimension();
        int rank = rank_of_mask_[cell.orientation];
        if (rank < 0) {
            throw std::invalid_argument("Invalid cell orientation.");
        }
        return site_index(cell.base) * static_cast<std::size_t>(binomial(D, k)) + static_cast<std::size_t>(rank);
    }
    CellIndex<D> cell_at(int k, std::size_t index) const {
        if (k < 0 || k > D || index >= cell_count(k)) {
            throw std::invalid_argument("Cell index out of range.");
        }
        auto per = static_cast<std::size_t>(binomial(D, k));
        CellIndex<D> c;
        c.base = site_coords(index / per);
        c.orientation = masks_[k][index % per];
        return c;
    }
    std::size_t cell_site(int k, std::size_t index) const {
        return index / static_cast<std::size_t>(binomial(D, k));
    }
    unsigned cell_orientation(int k, std::size_t index) const {
        return masks_[k][index % static_cast<std::size_t>(binomial(D, k))];
    }
    std::size_t cell_index(int k, std::size_t site, unsigned mask) const {
        return site * static_cast<std::size_t>(binomial(D, k)) + static_cast<std::size_t>(rank_of_mask_[mask]);
    }

    /// Flat boundary table: cell `i` of dimension k has boundary cells
    /// boundary(k)[i * 2k .. i * 2k + 2k).
    std::span<const std::uint32_t> boundary(int k) const {
        return boundary_[k];
    }
    std::span<const std::uint32_t> boundary_of(int k, std::size_t i) const {
        return std::span<const std::uint32_t>(boundary_[k]).subspan(i * 2 * k, 2 * k);
    }
    /// Flat coboundary table: cell `i` of dimension k has 2(D-k) cofaces.
    std::span<const std::uint32_t> coboundary_of(int k, std::size_t i) const {
        std::size_t n = 2 * static_cast<std::size_t>(D - k);
        return std::span<const std::uint32_t>(coboundary_[k]).subspan(i * n, n);
    }

    /// Boundary (target_dim = k-1) or coboundary (target_dim = k+1) cells of `cell`.
    std::vector<CellIndex<D>> incident_cells(const CellIndex<D> &cell, int target_dim) const {
        int k = cell.dimension();
        if (target_dim != k - 1 && target_dim != k + 1) {
            throw std::invalid_argument("incident_cells: target dimension must differ by exactly one.");
        }
        if (target_dim < 0 || target_dim > D) {
            throw std::invalid_argument("incident_cells: target dimension out of range.");
        }
        std::vector<CellIndex<D>> out;
        std::size_t i = index_of(cell);
        auto span = target_dim == k - 1 ? boundary_of(k, i) : coboundary_of(k, i);
        for (auto j : span) {
            out.push_back(cell_at(target_dim, j));
        }
        return out;
    }

    /// GF(2) boundary map applied to a k-chain.
    Chain boundary_of_chain(const Chain &c) const {
        int k = c.cell_dim;
        if (k < 1 || k > D || c.size() != cell_count(k)) {
            throw std::invalid_argument("boundary_of_chain: chain shape does not match the torus.");
        }
        Chain out = zero_chain(k - 1);
        const auto &tab = boundary_[k];
        const std::size_t n = 2 * static_cast<std::size_t>(k);
        for (std::size_t i = 0; i < c.size(); i++) {
            if (c.bits[i]) {
                for (std::size_t j = 0; j < n; j++) {
                    out.bits[tab[i * n + j]] ^= 1;
                }
            }
        }
        return out;
    }

    /// GF(2) coboundary map applied to a k-chain.
    Chain coboundary_of_chain(const Chain &c) const {
        int k = c.cell_dim;
        if (k < 0 || k >= D || c.size() != cell_count(k)) {
            throw std::invalid_argument("coboundary_of_chain: chain shape does not match the torus.");
        }
        Chain out = zero_chain(k + 1);
        const auto &tab = coboundary_[k];
        const std::size_t n = 2 * static_cast<std::size_t>(D - k);
        for (std::size_t i = 0; i < c.size(); i++) {
            if (c.bits[i]) {
                for (std::size_t j = 0; j < n; j++) {
                    out.bits[tab[i * n + j]] ^= 1;
                }
            }
        }
        return out;
    }

    /// Syndrome (defect set) of a qubit error chain: its boundary.
    Chain syndrome_of(const Chain &error) const {
        return boundary_of_chain(error);
    }

    /// Homology class of a k-cycle: one bit per k-orientation O, the parity of the
    /// cycle's support on cells of orientation O whose coordinates along the
    /// directions of O are all zero. This cut is dual to the logical operator
    /// spanning O, so the class is zero iff the cycle is a boundary.
    std::vector<std::uint8_t> homology_class(const Chain &cycle) const {
        int k = cycle.cell_dim;
        if (k < 1 || k > D || cycle.size() != cell_count(k)) {
            throw std::invalid_argument("homology_class: chain shape does not match the torus.");
        }
        if (!boundary_of_chain(cycle).empty()) {
            throw std::invalid_argument("homology_class: input chain has a non-empty boundary.");
        }
        return homology_bits_unchecked(cycle);
    }

    /// Same as homology_class but skips the cycle check.
    std::vector<std::uint8_t> homology_bits_unchecked(const Chain &cycle) const {
        int k = cycle.cell_dim;
        const auto per = static_cast<std::size_t>(binomial(D, k));
        std::vector<std::uint8_t> out(per, 0);
        for (std::size_t r = 0; r < per; r++) {
            unsigned mask = masks_[k][r];
            for (std::size_t site = 0; site < sites_; site++) {
                bool on_cut = true;
                for (int d = 0; d < D && on_cut; d++) {
                    if ((mask & (1u << d)) && (site / stride_[d]) % static_cast<std::size_t>(L_) != 0) {
                        on_cut = false;
                    }
                }
                if (on_cut) {
                    out[r] ^= cycle.bits[site * per + r];
                }
            }
        }
        return out;
    }

    static bool any_bit(const std::vector<std::uint8_t> &bits) {
        for (auto b : bits) {
            if (b) {
                return true;
            }
        }
        return false;
    }

   private:
    void build_boundary_table(int k) {
        const auto per = static_cast<std::size_t>(binomial(D, k));
        const auto per_lo = static_cast<std::size_t>(binomial(D, k - 1));
        auto &tab = boundary_[k];
        tab.resize(sites_ * per * 2 * static_cast<std::size_t>(k));
        std::size_t w = 0;
        for (std::size_t site = 0; site < sites_; site++) {
            for (std::size_t r = 0; r < per; r++) {
                unsigned mask = masks_[k][r];
                for (int d = 0; d < D; d++) {
                    if (!(mask & (1u << d))) {
                        continue;
                    }
                    unsigned sub = mask & ~(1u << d);
                    auto sr = static_cast<std::size_t>(rank_of_mask_[sub]);
                    tab[w++] = static_cast<std::uint32_t>(site * per_lo + sr);
                    tab[w++] = static_cast<std::uint32_t>(site_shift(site, d, +1) * per_lo + sr);
                }
            }
        }
    }
    void build_coboundary_table(int k) {
        const auto per = static_cast<std::size_t>(binomial(D, k));
        const auto per_hi = static_cast<std::size_t>(binomial(D, k + 1));
        auto &tab = coboundary_[k];
        tab.resize(sites_ * per * 2 * static_cast<std::size_t>(D - k));
        std::size_t w = 0;
        for (std::size_t site = 0; site < sites_; site++) {
            for (std::size_t r = 0; r < per; r++) {
                unsigned mask = masks_[k][r];
                for (int d = 0; d < D; d++) {
                    if (mask & (1u << d)) {
                        continue;
                    }
                    unsigned sup = mask | (1u << d);
                    auto sr = static_cast<std::size_t>(rank_of_mask_[sup]);
                    tab[w++] = static_cast<std::uint32_t>(site * per_hi + sr);
                    tab[w++] = static_cast<std::uint32_t>(site_shift(site, d, -1) * per_hi + sr);
                }
            }
        }
    }

    int L_;
    std::size_t sites_ = 0;
    std::array<std::size_t, D> stride_{};
    std::array<std::vector<unsigned>, D + 1> masks_;
    std::array<int, (1u << D)> rank_of_mask_{};
    std::array<std::vector<std::uint32_t>, D + 1> boundary_;
    std::array<std::vector<std::uint32_t>, D + 1> coboundary_;
};

using Torus2D = Torus<2>;
using Torus4D = Torus<4>;

// 2D conveniences. Vertex (x, y); horizontal edge H(x, y) joins (x, y)-(x+1, y);
// vertical edge V(x, y) joins (x, y)-(x, y+1). North is +y, east is +x.
namespace planar {

enum Axis : unsigned { kHorizontal = 1u, kVertical = 2u };

inline std::size_t vertex(const Torus2D &t, int x, int y) {
    return t.site_index({x, y});
}
inline std::size_t h_edge(const Torus2D &t, int x, int y) {
    return t.cell_index(1, t.site_index({x, y}), kHorizontal);
}
inline std::size_t v_edge(const Torus2D &t, int x, int y) {
    return t.cell_index(1, t.site_index({x, y}), kVertical);
}

}  // namespace planar

}  // namespace toric
