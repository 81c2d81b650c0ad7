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
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "toric/lattice.hpp"
#include "toric/rng.hpp"

namespace toric {

using Coord4 = std::array<int, 4>;

/// Number of faces of a closed side-l box: 6 l^2 (l+1)^2.
inline std::size_t box_face_count(int l) {
    auto a = static_cast<std::size_t>(l);
    return 6 * a * a * (a + 1) * (a + 1);
}

/// Cell structure of a closed hypercubic box with vertices [0, l]^4 and no wrapping.
///
/// Local cell ids are ordered like the torus: vertex-major, then orientation rank
/// (x, y, z, w for edges; xy, xz, xw, yz, yw, zw for faces).
class BoxComplex {
   public:
    static constexpr std::array<unsigned, 6> kFaceMasks{0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100};

    explicit BoxComplex(int l) : l_(l), n_(l + 1) {
        if (l < 1) {
            throw std::invalid_argument("box side length must be >= 1.");
        }
        const int nv = n_ * n_ * n_ * n_;
        edge_id_.assign(static_cast<std::size_t>(nv) * 4, -1);
        face_id_.assign(static_cast<std::size_t>(nv) * 6, -1);
        for (int v = 0; v < nv; v++) {
            Coord4 c = coords(v);
            for (int d = 0; d < 4; d++) {
                if (c[d] < l_) {
                    edge_id_[static_cast<std::size_t>(v * 4 + d)] = static_cast<int>(edge_vertex_.size());
                    edge_vertex_.push_back(v);
                    edge_dir_.push_back(d);
                }
            }
        }
        for (int v = 0; v < nv; v++) {
            Coord4 c = coords(v);
            for (int r = 0; r < 6; r++) {
                auto [mu, nu] = face_dirs(r);
                if (c[mu] < l_ && c[nu] < l_) {
                    face_id_[static_cast<std::size_t>(v * 6 + r)] = static_cast<int>(face_vertex_.size());
                    face_vertex_.push_back(v);
                    face_rank_.push_back(r);
                }
            }
        }
        vertex_edges_.assign(static_cast<std::size_t>(nv), {});
        for (int e = 0; e < edge_count(); e++) {
            auto [a, b] = edge_ends(e);
            vertex_edges_[static_cast<std::size_t>(a)].push_back(e);
            vertex_edges_[static_cast<std::size_t>(b)].push_back(e);
        }
        face_edges_.resize(face_vertex_.size());
        edge_faces_.assign(edge_vertex_.size(), {});
        for (int f = 0; f < face_count(); f++) {
            int v = face_vertex_[static_cast<std::size_t>(f)];
            auto [mu, nu] = face_dirs(face_rank_[static_cast<std::size_t>(f)]);
            std::array<int, 4> es{edge(v, mu), edge(shift(v, nu, 1), mu), edge(v, nu), edge(shift(v, mu, 1), nu)};
            face_edges_[static_cast<std::size_t>(f)] = es;
            for (int e : es) {
                edge_faces_[static_cast<std::size_t>(e)].push_back(f);
            }
        }
    }

    int l() const {
        return l_;
    }
    int side() const {
        return n_;
    }
    int vertex_count() const {
        return n_ * n_ * n_ * n_;
    }
    int edge_count() const {
        return static_cast<int>(edge_vertex_.size());
    }
    int face_count() const {
        return static_cast<int>(face_vertex_.size());
    }

    int vertex(const Coord4 &c) const {
        return ((c[0] * n_ + c[1]) * n_ + c[2]) * n_ + c[3];
    }
    Coord4 coords(int v) const {
        Coord4 c{};
        for (int d = 3; d >= 0; d--) {
            c[static_cast<std::size_t>(d)] = v % n_;
            v /= n_;
        }
        return c;
    }
    int shift(int v, int dir, int delta) const {
        int stride = 1;
        for (int d = 3; d > dir; d--) {
            stride *= n_;
        }
        return v + delta * stride;
    }
    static std::pair<int, int> face_dirs(int rank) {
        static constexpr std::array<std::pair<int, int>, 6> kDirs{
            std::pair{0, 1}, std::pair{0, 2}, std::pair{0, 3}, std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}};
        return kDirs[static_cast<std::size_t>(rank)];
    }

    /// Local edge id from base vertex and direction, or -1 if it leaves the box.
    int edge(int v, int dir) const {
        return edge_id_[static_cast<std::size_t>(v * 4 + dir)];
    }
    int face(int v, int rank) const {
        return face_id_[static_cast<std::size_t>(v * 6 + rank)];
    }
    std::pair<int, int> edge_ends(int e) const {
        int v = edge_vertex_[static_cast<std::size_t>(e)];
        return {v, shift(v, edge_dir_[static_cast<std::size_t>(e)], 1)};
    }
    int edge_base(int e) const {
        return edge_vertex_[static_cast<std::size_t>(e)];
    }
    int edge_dir(int e) const {
        return edge_dir_[static_cast<std::size_t>(e)];
    }
    int face_base(int f) const {
        return face_vertex_[static_cast<std::size_t>(f)];
    }
    int face_rank(int f) const {
        return face_rank_[static_cast<std::size_t>(f)];
    }
    const std::array<int, 4> &face_edges(int f) const {
        return face_edges_[static_cast<std::size_t>(f)];
    }
    const std::vector<int> &edge_faces(int e) const {
        return edge_faces_[static_cast<std::size_t>(e)];
    }
    const std::vector<int> &vertex_edges(int v) const {
        return vertex_edges_[static_cast<std::size_t>(v)];
    }

   private:
    int l_;
    int n_;
    std::vector<int> edge_id_;
    std::vector<int> face_id_;
    std::vector<int> edge_vertex_;
    std::vector<int> edge_dir_;
    std::vector<int> face_vertex_;
    std::vector<int> face_rank_;
    std::vector<std::vector<int>> vertex_edges_;
    std::vector<std::array<int, 4>> face_edges_;
    std::vector<std::vector<int>> edge_faces_;
};

/// A box placed on the torus: local vertex c sits at anchor + c (mod L).
struct Box {
    Coord4 anchor{};
    int l = 0;
};

/// The grid of floor(L/(l+1))^4 disjoint boxes, shifted by `offset`.
inline std::vector<Box> partition_boxes(int L, int l, const Coord4 &offset) {
    if (l < 1 || l + 1 > L) {
        throw std::invalid_argument("partition_boxes: need 1 <= l and l+1 <= L (l=" + std::to_string(l) +
                                    ", L=" + std::to_string(L) + ").");
    }
    for (int d = 0; d < 4; d++) {
        if (offset[static_cast<std::size_t>(d)] < 0 || offset[static_cast<std::size_t>(d)] >= L) {
            throw std::invalid_argument("partition_boxes: offset outside [0, L).");
        }
    }
    const int per = L / (l + 1);
    std::vector<Box> out;
    out.reserve(static_cast<std::size_t>(per * per * per * per));
    for (int a = 0; a < per; a++) {
        for (int b = 0; b < per; b++) {
            for (int c = 0; c < per; c++) {
                for (int d = 0; d < per; d++) {
                    Box box;
                    box.l = l;
                    box.anchor = {(offset[0] + a * (l + 1)) % L, (offset[1] + b * (l + 1)) % L,
                                  (offset[2] + c * (l + 1)) % L, (offset[3] + d * (l + 1)) % L};
                    out.push_back(box);
                }
            }
        }
    }
    return out;
}

/// Maps local box cells to global torus cells.
class BoxEmbedding {
   public:
    BoxEmbedding(const Torus4D &torus, const BoxComplex &cx, const Box &box) {
        const int nv = cx.vertex_count();
        site_.resize(static_cast<std::size_t>(nv));
        for (int v = 0; v < nv; v++) {
            Coord4 c = cx.coords(v);
            for (int d = 0; d < 4; d++) {
                c[static_cast<std::size_t>(d)] += box.anchor[static_cast<std::size_t>(d)];
            }
            site_[static_cast<std::size_t>(v)] = torus.site_index(c);
        }
        edge_.resize(static_cast<std::size_t>(cx.edge_count()));
        for (int e = 0; e < cx.edge_count(); e++) {
            edge_[static_cast<std::size_t>(e)] = static_cast<std::uint32_t>(
                torus.cell_index(1, site_[static_cast<std::size_t>(cx.edge_base(e))], 1u << cx.edge_dir(e)));
        }
        face_.resize(static_cast<std::size_t>(cx.face_count()));
        for (int f = 0; f < cx.face_count(); f++) {
            face_[static_cast<std::size_t>(f)] =
                static_cast<std::uint32_t>(torus.cell_index(2, site_[static_cast<std::size_t>(cx.face_base(f))],
                                                            BoxComplex::kFaceMasks[static_cast<std::size_t>(cx.face_rank(f))]));
        }
    }
    std::uint32_t edge(int e) const {
        return edge_[static_cast<std::size_t>(e)];
    }
    std::uint32_t face(int f) const {
        return face_[static_cast<std::size_t>(f)];
    }
    std::size_t site(int v) const {
        return site_[static_cast<std::size_t>(v)];
    }

   private:
    std::vector<std::size_t> site_;
    std::vector<std::uint32_t> edge_;
    std::vector<std::uint32_t> face_;
};

/// Vertices of the box with odd degree in the local edge set `s`, ordered so the two
/// ends of each string of `s` are adjacent (strings traced from the lowest free end).
inline std::vector<int> box_intersection_vertices(const BoxComplex &cx, const std::vector<std::uint8_t> &s) {
    const int nv = cx.vertex_count();
    std::vector<int> degree(static_cast<std::size_t>(nv), 0);
    for (int e = 0; e < cx.edge_count(); e++) {
        if (s[static_cast<std::size_t>(e)]) {
            auto [a, b] = cx.edge_ends(e);
            degree[static_cast<std::size_t>(a)]++;
            degree[static_cast<std::size_t>(b)]++;
        }
    }
    std::vector<std::uint8_t> used(s.size(), 0);
    std::vector<std::uint8_t> placed(static_cast<std::size_t>(nv), 0);
    std::vector<int> out;
    for (int v = 0; v < nv; v++) {
        if (degree[static_cast<std::size_t>(v)] % 2 == 0 || placed[static_cast<std::size_t>(v)]) {
            continue;
        }
        // Walk along unused edges until another odd vertex is reached.
        int cur = v;
        int end = -1;
        while (true) {
            int next_edge = -1;
            for (int e : cx.vertex_edges(cur)) {
                if (s[static_cast<std::size_t>(e)] && !used[static_cast<std::size_t>(e)]) {
                    next_edge = e;
                    break;
                }
            }
            if (next_edge < 0) {
                break;
            }
            used[static_cast<std::size_t>(next_edge)] = 1;
            auto [a, b] = cx.edge_ends(next_edge);
            cur = (a == cur) ? b : a;
            if (degree[static_cast<std::size_t>(cur)] % 2 == 1 && !placed[static_cast<std::size_t>(cur)] && cur != v) {
                end = cur;
                break;
            }
        }
        placed[static_cast<std::size_t>(v)] = 1;
        out.push_back(v);
        if (end >= 0) {
            placed[static_cast<std::size_t>(end)] = 1;
            out.push_back(end);
        }
    }
    // Any odd vertex not reached by a walk (possible when walks got tangled) is appended.
    for (int v = 0; v < nv; v++) {
        if (degree[static_cast<std::size_t>(v)] % 2 == 1 && !placed[static_cast<std::size_t>(v)]) {
            out.push_back(v);
        }
    }
    return out;
}

/// Among the shortest monotone lattice paths u -> v, one minimizing the summed squared
/// distance of its vertices to the segment u-v; ties are broken uniformly at random.
/// Returns local edge ids.
inline std::vector<int> least_deviating_path(const BoxComplex &cx, int u, int v, TrialRng &rng) {
    const Coord4 a = cx.coords(u);
    const Coord4 b = cx.coords(v);
    Coord4 len{};
    Coord4 sgn{};
    long long dd = 0;
    for (int d = 0; d < 4; d++) {
        int diff = b[static_cast<std::size_t>(d)] - a[static_cast<std::size_t>(d)];
        len[static_cast<std::size_t>(d)] = std::abs(diff);
        sgn[static_cast<std::size_t>(d)] = diff >= 0 ? 1 : -1;
        dd += static_cast<long long>(diff) * diff;
    }
    if (dd == 0) {
        return {};
    }
    const Coord4 n{len[0] + 1, len[1] + 1, len[2] + 1, len[3] + 1};
    auto idx = [&](const Coord4 &w) { return ((w[0] * n[1] + w[1]) * n[2] + w[2]) * n[3] + w[3]; };
    const int total = n[0] * n[1] * n[2] * n[3];
    // Squared distance to the line through u and v, scaled by |d|^2 to stay integral.
    auto cost = [&](const Coord4 &w) {
        long long ww = 0;
        long long wd = 0;
        for (int d = 0; d < 4; d++) {
            long long wi = w[static_cast<std::size_t>(d)];
            ww += wi * wi;
            wd += wi * len[static_cast<std::size_t>(d)];
        }
        return ww * dd - wd * wd;
    };
    const long long inf = std::numeric_limits<long long>::max();
    std::vector<long long> best(static_cast<std::size_t>(total), inf);
    std::vector<std::uint64_t> count(static_cast<std::size_t>(total), 0);
    Coord4 w{};
    for (w[0] = 0; w[0] < n[0]; w[0]++) {
        for (w[1] = 0; w[1] < n[1]; w[1]++) {
            for (w[2] = 0; w[2] < n[2]; w[2]++) {
                for (w[3] = 0; w[3] < n[3]; w[3]++) {
                    const int i = idx(w);
                    const long long c = cost(w);
                    if (i == 0) {
                        best[0] = c;
                        count[0] = 1;
                        continue;
                    }
                    long long m = inf;
                    std::uint64_t cnt = 0;
                    for (int d = 0; d < 4; d++) {
                        if (w[static_cast<std::size_t>(d)] == 0) {
                            continue;
                        }
                        Coord4 p = w;
                        p[static_cast<std::size_t>(d)]--;
                        long long bp = best[static_cast<std::size_t>(idx(p))];
                        if (bp < m) {
                            m = bp;
                            cnt = count[static_cast<std::size_t>(idx(p))];
                        } else if (bp == m) {
                            cnt += count[static_cast<std::size_t>(idx(p))];
                        }
                    }
                    best[static_cast<std::size_t>(i)] = m + c;
                    count[static_cast<std::size_t>(i)] = cnt;
                }
            }
        }
    }
    // Backward sampling, choosing each predecessor with probability proportional to
    // the number of optimal paths through it.
    std::vector<int> edges;
    Coord4 cur = len;
    while (idx(cur) != 0) {
        const long long target = best[static_cast<std::size_t>(idx(cur))] - cost(cur);
        std::array<int, 4> dirs{};
        std::array<std::uint64_t, 4> weights{};
        int k = 0;
        std::uint64_t sum = 0;
        for (int d = 0; d < 4; d++) {
            if (cur[static_cast<std::size_t>(d)] == 0) {
                continue;
            }
            Coord4 p = cur;
            p[static_cast<std::size_t>(d)]--;
            if (best[static_cast<std::size_t>(idx(p))] == target) {
                dirs[static_cast<std::size_t>(k)] = d;
                weights[static_cast<std::size_t>(k)] = count[static_cast<std::size_t>(idx(p))];
                sum += weights[static_cast<std::size_t>(k)];
                k++;
            }
        }
        int chosen = dirs[0];
        if (k > 1) {
            std::uint64_t r = rng.below(sum);
            for (int j = 0; j < k; j++) {
                if (r < weights[static_cast<std::size_t>(j)]) {
                    chosen = dirs[static_cast<std::size_t>(j)];
                    break;
                }
                r -= weights[static_cast<std::size_t>(j)];
            }
        }
        Coord4 prev = cur;
        prev[static_cast<std::size_t>(chosen)]--;
        // Edge between the absolute positions of prev and cur along `chosen`.
        Coord4 pa{};
        Coord4 ca{};
        for (int d = 0; d < 4; d++) {
            pa[static_cast<std::size_t>(d)] = a[static_cast<std::size_t>(d)] + sgn[static_cast<std::size_t>(d)] * prev[static_cast<std::size_t>(d)];
            ca[static_cast<std::size_t>(d)] = a[static_cast<std::size_t>(d)] + sgn[static_cast<std::size_t>(d)] * cur[static_cast<std::size_t>(d)];
        }
        const Coord4 &base = sgn[static_cast<std::size_t>(chosen)] > 0 ? pa : ca;
        edges.push_back(cx.edge(cx.vertex(base), chosen));
        cur = prev;
    }
    std::reverse(edges.begin(), edges.end());
    return edges;
}

namespace detail {

// Rank of the face spanned by directions a < b.
inline int face_rank_of(int a, int b) {
    static constexpr int kRank[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    return kRank[a][b];
}

// Depth-first branch-and-bound for a minimum face set with a prescribed boundary,
// branching on the faces through the lowest unsatisfied edge. An incumbent can be
// supplied; the search stops after `node_budget` nodes.
class MinSurfaceSearch {
   public:
    MinSurfaceSearch(const BoxComplex &cx, const std::vector<std::uint8_t> &target, const std::vector<std::uint8_t> &allowed,
                     std::vector<int> region_edges, std::uint64_t node_budget = 0)
        : cx_(cx), residual_(target), allowed_(allowed), region_edges_(std::move(region_edges)), budget_(node_budget) {
        blocked_.assign(static_cast<std::size_t>(cx.face_count()), 0);
        mark_.assign(static_cast<std::size_t>(cx.face_count()), 0);
        for (auto b : residual_) {
            residual_count_ += b;
        }
    }

    void set_incumbent(std::vector<int> faces) {
        std::sort(faces.begin(), faces.end());
        best_ = std::move(faces);
        have_best_ = true;
    }

    std::vector<int> run() {
        dfs();
        return best_;
    }
    std::uint64_t nodes() const {
        return nodes_;
    }
    /// True if the search finished, so the result is optimal.
    bool complete() const {
        return !out_of_budget_;
    }

   private:
    bool usable(int f) const {
        return allowed_[static_cast<std::size_t>(f)] && !blocked_[static_cast<std::size_t>(f)];
    }

    void toggle(int f) {
        for (int e : cx_.face_edges(f)) {
            auto &r = residual_[static_cast<std::size_t>(e)];
            r ^= 1;
            residual_count_ += r ? 1 : -1;
        }
    }

    // Edges of the residual sharing no usable face each need their own face.
    int lower_bound() {
        stamp_++;
        int picked = 0;
        for (int e : region_edges_) {
            if (!residual_[static_cast<std::size_t>(e)]) {
                continue;
            }
            bool free = true;
            bool any = false;
            for (int f : cx_.edge_faces(e)) {
                if (!usable(f)) {
                    continue;
                }
                any = true;
                if (mark_[static_cast<std::size_t>(f)] == stamp_) {
                    free = false;
                }
            }
            if (!any) {
                return kInfeasible;
            }
            if (free) {
                picked++;
                for (int f : cx_.edge_faces(e)) {
                    mark_[static_cast<std::size_t>(f)] = stamp_;
                }
            }
        }
        return std::max(picked, (residual_count_ + 3) / 4);
    }

    bool better(const std::vector<int> &cand) const {
        if (!have_best_ || cand.size() < best_.size()) {
            return true;
        }
        if (cand.size() > best_.size()) {
            return false;
        }
        std::vector<int> a = cand;
        std::sort(a.begin(), a.end());
        return a < best_;
    }

    void dfs() {
        if (budget_ != 0 && nodes_ >= budget_) {
            out_of_budget_ = true;
            return;
        }
        nodes_++;
        if (residual_count_ == 0) {
            if (better(chosen_)) {
                best_ = chosen_;
                std::sort(best_.begin(), best_.end());
                have_best_ = true;
            }
            return;
        }
        const int lb = lower_bound();
        if (lb == kInfeasible) {
            return;
        }
        if (have_best_ && chosen_.size() + static_cast<std::size_t>(lb) > best_.size()) {
            return;
        }
        int e = -1;
        for (int g : region_edges_) {
            if (residual_[static_cast<std::size_t>(g)]) {
                e = g;
                break;
            }
        }
        // Try faces that clear the most residual first so a good bound appears early.
        std::array<std::pair<int, int>, 6> cand{};
        int nc = 0;
        for (int f : cx_.edge_faces(e)) {
            if (!usable(f)) {
                continue;
            }
            int gain = 0;
            for (int g : cx_.face_edges(f)) {
                gain += residual_[static_cast<std::size_t>(g)] ? 1 : -1;
            }
            cand[static_cast<std::size_t>(nc++)] = {-gain, f};
        }
        std::sort(cand.begin(), cand.begin() + nc);
        std::array<int, 6> tried{};
        int nt = 0;
        for (int i = 0; i < nc && !out_of_budget_; i++) {
            int f = cand[static_cast<std::size_t>(i)].second;
            chosen_.push_back(f);
            blocked_[static_cast<std::size_t>(f)]++;
            toggle(f);
            dfs();
            toggle(f);
            chosen_.pop_back();
            // f stays blocked for the remaining siblings: those branches exclude it.
            tried[static_cast<std::size_t>(nt++)] = f;
        }
        for (int i = 0; i < nt; i++) {
            blocked_[static_cast<std::size_t>(tried[static_cast<std::size_t>(i)])]--;
        }
    }

    static constexpr int kInfeasible = std::numeric_limits<int>::max() / 2;

    const BoxComplex &cx_;
    std::vector<std::uint8_t> residual_;
    int residual_count_ = 0;
    std::vector<std::uint8_t> allowed_;
    std::vector<int> region_edges_;
    std::uint64_t budget_ = 0;
    bool out_of_budget_ = false;
    std::vector<int> blocked_;
    std::vector<std::uint32_t> mark_;
    std::uint32_t stamp_ = 0;
    std::vector<int> chosen_;
    std::vector<int> best_;
    bool have_best_ = false;
    std::uint64_t nodes_ = 0;
};

inline bool inside_range(const BoxComplex &cx, int f, const Coord4 &lo, const Coord4 &hi) {
    Coord4 c = cx.coords(cx.face_base(f));
    auto [mu, nu] = BoxComplex::face_dirs(cx.face_rank(f));
    for (int d = 0; d < 4; d++) {
        int top = c[static_cast<std::size_t>(d)] + ((d == mu || d == nu) ? 1 : 0);
        if (c[static_cast<std::size_t>(d)] < lo[static_cast<std::size_t>(d)] || top > hi[static_cast<std::size_t>(d)]) {
            return false;
        }
    }
    return true;
}

// A surface bounded by the closed edge set `target`, built by sweeping the loop down
// each coordinate in turn onto the corner `lo`.
inline std::vector<std::uint8_t> swept_surface(const BoxComplex &cx, std::vector<std::uint8_t> target, const Coord4 &lo) {
    std::vector<std::uint8_t> faces(static_cast<std::size_t>(cx.face_count()), 0);
    for (int d = 0; d < 4; d++) {
        std::vector<std::uint8_t> next(target.size(), 0);
        for (int e = 0; e < cx.edge_count(); e++) {
            if (!target[static_cast<std::size_t>(e)]) {
                continue;
            }
            const int a = cx.edge_dir(e);
            if (a == d) {
                continue;  // sweeping a closed loop cancels these
            }
            Coord4 c = cx.coords(cx.edge_base(e));
            const int rank = face_rank_of(std::min(a, d), std::max(a, d));
            for (int k = lo[static_cast<std::size_t>(d)]; k < c[static_cast<std::size_t>(d)]; k++) {
                Coord4 b = c;
                b[static_cast<std::size_t>(d)] = k;
                faces[static_cast<std::size_t>(cx.face(cx.vertex(b), rank))] ^= 1;
            }
            c[static_cast<std::size_t>(d)] = lo[static_cast<std::size_t>(d)];
            next[static_cast<std::size_t>(cx.edge(cx.vertex(c), a))] ^= 1;
        }
        target = std::move(next);
    }
    return faces;
}

// Flips 3-cubes inside [lo, hi] while that shrinks the surface; the boundary is kept.
inline void shrink_by_cubes(const BoxComplex &cx, std::vector<std::uint8_t> &faces, const Coord4 &lo, const Coord4 &hi) {
    std::vector<std::array<int, 6>> cubes;
    Coord4 c{};
    for (c[0] = lo[0]; c[0] <= hi[0]; c[0]++) {
        for (c[1] = lo[1]; c[1] <= hi[1]; c[1]++) {
            for (c[2] = lo[2]; c[2] <= hi[2]; c[2]++) {
                for (c[3] = lo[3]; c[3] <= hi[3]; c[3]++) {
                    for (int skip = 0; skip < 4; skip++) {
                        std::array<int, 3> dirs{};
                        int n = 0;
                        bool fits = true;
                        for (int d = 0; d < 4; d++) {
                            if (d == skip) {
                                continue;
                            }
                            dirs[static_cast<std::size_t>(n++)] = d;
                            fits = fits && c[static_cast<std::size_t>(d)] < hi[static_cast<std::size_t>(d)];
                        }
                        if (!fits) {
                            continue;
                        }
                        std::array<int, 6> cube{};
                        int k = 0;
                        for (int i = 0; i < 3; i++) {
                            const int a = dirs[static_cast<std::size_t>(i)];
                            const int b = dirs[static_cast<std::size_t>((i + 1) % 3)];
                            const int third = dirs[static_cast<std::size_t>((i + 2) % 3)];
                            const int rank = face_rank_of(std::min(a, b), std::max(a, b));
                            const int v = cx.vertex(c);
                            cube[static_cast<std::size_t>(k++)] = cx.face(v, rank);
                            cube[static_cast<std::size_t>(k++)] = cx.face(cx.shift(v, third, 1), rank);
                        }
                        cubes.push_back(cube);
                    }
                }
            }
        }
    }
    bool improved = true;
    while (improved) {
        improved = false;
        for (const auto &cube : cubes) {
            int in = 0;
            for (int f : cube) {
                in += faces[static_cast<std::size_t>(f)];
            }
            if (in >= 4) {
                for (int f : cube) {
                    faces[static_cast<std::size_t>(f)] ^= 1;
                }
                improved = true;
            }
        }
    }
}

}  // namespace detail

struct MinSurfaceOptions {
    /// Branch-and-bound nodes allowed per connected component; 0 means unlimited.
    std::uint64_t node_budget = 0;
};

struct MinSurfaceResult {
    std::vector<int> faces;  // sorted local face ids
    bool optimal = true;     // every component search ran to completion
    std::uint64_t nodes = 0;
};

/// Smallest face set R inside the box whose boundary is `target` (local edges).
///
/// Each connected component of the target is solved on its own, over the faces inside
/// the component's bounding box: coordinate-wise clamping onto that sub-box is a chain
/// map that never enlarges a surface, so the restriction loses no optimum. The search
/// starts from a swept surface shrunk by cube flips and returns the lexicographically
/// smallest sorted optimum when it completes within the budget.
inline MinSurfaceResult min_surface_search(const BoxComplex &cx, const std::vector<std::uint8_t> &target,
                                           const MinSurfaceOptions &options = {}) {
    if (target.size() != static_cast<std::size_t>(cx.edge_count())) {
        throw std::invalid_argument("min_surface: edge set has the wrong size.");
    }
    std::vector<int> degree(static_cast<std::size_t>(cx.vertex_count()), 0);
    for (int e = 0; e < cx.edge_count(); e++) {
        if (target[static_cast<std::size_t>(e)]) {
            auto [a, b] = cx.edge_ends(e);
            degree[static_cast<std::size_t>(a)]++;
            degree[static_cast<std::size_t>(b)]++;
        }
    }
    for (int v = 0; v < cx.vertex_count(); v++) {
        if (degree[static_cast<std::size_t>(v)] % 2 != 0) {
            throw std::invalid_argument("min_surface: target has odd degree at a box vertex, so it is not a boundary.");
        }
    }
    MinSurfaceResult result;
    std::vector<std::uint8_t> seen(target.size(), 0);
    for (int start = 0; start < cx.edge_count(); start++) {
        if (!target[static_cast<std::size_t>(start)] || seen[static_cast<std::size_t>(start)]) {
            continue;
        }
        // Collect the component through shared vertices.
        std::vector<std::uint8_t> comp(target.size(), 0);
        std::vector<int> stack{start};
        seen[static_cast<std::size_t>(start)] = 1;
        Coord4 lo{cx.l(), cx.l(), cx.l(), cx.l()};
        Coord4 hi{0, 0, 0, 0};
        while (!stack.empty()) {
            int e = stack.back();
            stack.pop_back();
            comp[static_cast<std::size_t>(e)] = 1;
            auto [a, b] = cx.edge_ends(e);
            for (int v : {a, b}) {
                Coord4 c = cx.coords(v);
                for (int d = 0; d < 4; d++) {
                    lo[static_cast<std::size_t>(d)] = std::min(lo[static_cast<std::size_t>(d)], c[static_cast<std::size_t>(d)]);
                    hi[static_cast<std::size_t>(d)] = std::max(hi[static_cast<std::size_t>(d)], c[static_cast<std::size_t>(d)]);
                }
                for (int g : cx.vertex_edges(v)) {
                    if (target[static_cast<std::size_t>(g)] && !seen[static_cast<std::size_t>(g)]) {
                        seen[static_cast<std::size_t>(g)] = 1;
                        stack.push_back(g);
                    }
                }
            }
        }
        std::vector<std::uint8_t> allowed(static_cast<std::size_t>(cx.face_count()), 0);
        std::vector<std::uint8_t> in_region(target.size(), 0);
        for (int f = 0; f < cx.face_count(); f++) {
            if (detail::inside_range(cx, f, lo, hi)) {
                allowed[static_cast<std::size_t>(f)] = 1;
                for (int e : cx.face_edges(f)) {
                    in_region[static_cast<std::size_t>(e)] = 1;
                }
            }
        }
        std::vector<int> region_edges;
        for (int e = 0; e < cx.edge_count(); e++) {
            if (in_region[static_cast<std::size_t>(e)]) {
                region_edges.push_back(e);
            }
        }
        std::vector<std::uint8_t> seed = detail::swept_surface(cx, comp, lo);
        detail::shrink_by_cubes(cx, seed, lo, hi);
        std::vector<int> incumbent;
        for (int f = 0; f < cx.face_count(); f++) {
            if (seed[static_cast<std::size_t>(f)]) {
                incumbent.push_back(f);
            }
        }
        detail::MinSurfaceSearch search(cx, comp, allowed, std::move(region_edges), options.node_budget);
        search.set_incumbent(std::move(incumbent));
        std::vector<int> part = search.run();
        result.nodes += search.nodes();
        result.optimal = result.optimal && search.complete();
        result.faces.insert(result.faces.end(), part.begin(), part.end());
    }
    // Components may share faces; cancel duplicates so the boundary stays exact.
    std::sort(result.faces.begin(), result.faces.end());
    std::vector<int> out;
    for (std::size_t i = 0; i < result.faces.size();) {
        std::size_t j = i;
        while (j < result.faces.size() && result.faces[j] == result.faces[i]) {
            j++;
        }
        if ((j - i) % 2 == 1) {
            out.push_back(result.faces[i]);
        }
        i = j;
    }
    result.faces = std::move(out);
    return result;
}

/// Minimum surface without a node budget; see min_surface_search.
inline std::vector<int> min_surface(const BoxComplex &cx, const std::vector<std::uint8_t> &target) {
    return min_surface_search(cx, target).faces;
}

}  // namespace toric
