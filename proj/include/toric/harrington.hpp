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
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "toric/lattice.hpp"

namespace toric {

enum class Strategy { kNonDivision, kDivision };

struct HarringtonConfig {
    static constexpr int kTauInfinite = 0;

    int Q = 3;
    int U = 10;
    double f_c = 0.9;
    double f_n = 0.4;
    Strategy strategy = Strategy::kNonDivision;
    int b = 0;
    int tau = 1;  // CA steps per QEC cycle; kTauInfinite runs until the syndrome clears
    long long infinite_step_cap = 0;  // 0 picks a cap from the hierarchy depth

    bool tau_infinite() const {
        return tau == kTauInfinite;
    }

    void validate() const {
        if (Q < 3 || Q % 2 == 0) {
            throw std::invalid_argument("Q must be an odd integer >= 3, got " + std::to_string(Q) + ".");
        }
        if (U < Q) {
            throw std::invalid_argument("U must be >= Q (U=" + std::to_string(U) + ", Q=" + std::to_string(Q) + ").");
        }
        if (!(f_c > 0 && f_c < 1)) {
            throw std::invalid_argument("f_c must lie in (0, 1), got " + std::to_string(f_c) + ".");
        }
        if (!(f_n > 0 && f_n < 1)) {
            throw std::invalid_argument("f_n must lie in (0, 1), got " + std::to_string(f_n) + ".");
        }
        if (strategy == Strategy::kDivision && (b < 1 || b * b != U)) {
            throw std::invalid_argument("division strategy requires U = b*b (U=" + std::to_string(U) +
                                        ", b=" + std::to_string(b) + ").");
        }
        if (tau < 0) {
            throw std::invalid_argument("tau must be a positive integer or infinite.");
        }
    }

    void validate_for(int L, double q) const;
};

/// Number of hierarchy levels k with L = Q^k; throws if L is not a power of Q.
inline int hierarchy_levels(int L, int Q) {
    int k = 0;
    long long v = 1;
    while (v < L) {
        v *= Q;
        k++;
    }
    if (v != L || k < 1) {
        throw std::invalid_argument("L=" + std::to_string(L) + " is not a power of Q=" + std::to_string(Q) + ".");
    }
    return k;
}

inline void HarringtonConfig::validate_for(int L, double q) const {
    validate();
    hierarchy_levels(L, Q);
    if (tau_infinite() && q > 0) {
        throw std::invalid_argument("tau=inf is only supported with noiseless syndromes (q=0).");
    }
}

inline long long int_pow(long long base, int e) {
    long long r = 1;
    for (int i = 0; i < e; i++) {
        r *= base;
    }
    return r;
}

enum class Region { kNWQ, kNC, kNEQ, kWC, kCenter, kEC, kSWQ, kSC, kSEQ };

inline const char *region_name(Region r) {
    static constexpr const char *kNames[] = {"NWQ", "NC", "NEQ", "WC", "center", "EC", "SWQ", "SC", "SEQ"};
    return kNames[static_cast<int>(r)];
}

/// Position (px, py) inside a Q x Q colony; py grows northwards.
inline Region classify_region(int px, int py, int Q) {
    if (Q < 3 || Q % 2 == 0) {
        throw std::invalid_argument("classify_region: Q must be odd and >= 3.");
    }
    if (px < 0 || px >= Q || py < 0 || py >= Q) {
        throw std::invalid_argument("classify_region: position outside the colony.");
    }
    const int c = (Q - 1) / 2;
    if (px == c && py == c) {
        return Region::kCenter;
    }
    if (px == c) {
        return py > c ? Region::kNC : Region::kSC;
    }
    if (py == c) {
        return px < c ? Region::kWC : Region::kEC;
    }
    if (px < c) {
        return py > c ? Region::kNWQ : Region::kSWQ;
    }
    return py > c ? Region::kNEQ : Region::kSEQ;
}

// Directions. Nearest neighbours N, E, S, W occupy bits 0-3 of a neighbour mask,
// diagonals NE, SE, SW, NW bits 4-7.
enum Dir : int { kNorth = 0, kEast = 1, kSouth = 2, kWest = 3 };
inline constexpr std::array<int, 4> kDirDx{0, 1, 0, -1};
inline constexpr std::array<int, 4> kDirDy{1, 0, -1, 0};
inline constexpr std::array<int, 4> kDiagDx{1, 1, -1, -1};
inline constexpr std::array<int, 4> kDiagDy{1, -1, -1, 1};

namespace detail {

// Collapses a colony coordinate onto the 5-wide reference colony:
// border, inner quadrant band, corridor, inner band, border.
inline int template_index(int p, int Q) {
    const int c = (Q - 1) / 2;
    if (p == 0) {
        return 0;
    }
    if (p < c) {
        return 1;
    }
    if (p == c) {
        return 2;
    }
    if (p < Q - 1) {
        return 3;
    }
    return 4;
}

// Edges a cell may flip in the nearest-neighbour step, as a mask over N, E, S, W.
inline unsigned nn_owned(int tx, int ty) {
    unsigned m = 0;
    if (tx == 0) {
        m |= 1u << kWest;
    }
    if (ty == 0) {
        m |= 1u << kSouth;
    }
    const bool west = tx <= 1;
    const bool east = tx >= 3;
    const bool south = ty <= 1;
    const bool north = ty >= 3;
    if (ty == 2) {
        if (west) {
            m |= 1u << kEast;
        }
        if (east) {
            m |= 1u << kWest;
        }
    } else if (tx == 2) {
        if (south) {
            m |= 1u << kNorth;
        }
        if (north) {
            m |= 1u << kSouth;
        }
    } else {
        m |= 1u << (west ? kEast : kWest);
        m |= 1u << (south ? kNorth : kSouth);
    }
    return m;
}

// Next-nearest-neighbour arcs: for template cell (tx, ty) and diagonal NE, SE, SW, NW,
// the edge flipped towards that diagonal ('.' = no arrow). Rows run north to south.
inline constexpr const char *kDiagonalTable[5][5] = {
    {"ESSW", "ESSN", "NSSN", "NSSW", "NSSW"},
    {"EESW", "ESS.", ".SS.", ".SSW", "ESWW"},
    {"EEWW", "EE..", "....", "..WW", "EEWW"},
    {"EEWN", "NE.N", "N..N", "N.WN", "NEWW"},
    {"NEWN", "NESN", "NSSN", "NSWN", "NSWN"},
};

inline int diagonal_arrow(int tx, int ty, int diag) {
    char ch = kDiagonalTable[4 - ty][tx][diag];
    switch (ch) {
        case 'N':
            return kNorth;
        case 'E':
            return kEast;
        case 'S':
            return kSouth;
        case 'W':
            return kWest;
        default:
            return -1;
    }
}

inline bool leaves_colony(int px, int py, int dx, int dy, int Q) {
    int nx = px + dx;
    int ny = py + dy;
    return nx < 0 || nx >= Q || ny < 0 || ny >= Q;
}

inline int move_to_center(int px, int py, int Q) {
    const int c = (Q - 1) / 2;
    switch (classify_region(px, py, Q)) {
        case Region::kCenter:
            return -1;
        case Region::kWC:
            return kEast;
        case Region::kEC:
            return kWest;
        case Region::kSC:
            return kNorth;
        case Region::kNC:
            return kSouth;
        default:
            break;
    }
    // Quadrants head for the farther corridor; ties go north/south.
    const int to_vertical = std::abs(c - px);
    const int to_horizontal = std::abs(c - py);
    if (to_vertical > to_horizontal) {
        return px < c ? kEast : kWest;
    }
    return py < c ? kNorth : kSouth;
}

}  // namespace detail

/// The three-step local rule for a cell that holds a defect.
///
/// `neighbors` has bits N, E, S, W, NE, SE, SW, NW (bits 0..7) set for each
/// neighbouring cell holding a defect. Returns the direction of the edge the cell
/// flips, or -1 when it leaves the work to a neighbour (or sits at the center).
inline int local_rule(unsigned neighbors, int px, int py, int Q) {
    const int tx = detail::template_index(px, Q);
    const int ty = detail::template_index(py, Q);
    if (neighbors & 0xFu) {
        const unsigned owned = detail::nn_owned(tx, ty);
        int best = -1;
        int best_key = 1 << 20;
        for (int d = 0; d < 4; d++) {
            if (!((neighbors >> d) & 1u)) {
                continue;
            }
            bool cross = detail::leaves_colony(px, py, kDirDx[d], kDirDy[d], Q);
            bool mine = (owned >> d) & 1u;
            int key = (cross ? 0 : 8) + (mine ? 4 : 0) + d;
            if (key < best_key) {
                best_key = key;
                best = d;
            }
        }
        return ((owned >> best) & 1u) ? best : -1;
    }
    if (neighbors & 0xF0u) {
        int best_arrow = -1;
        int best_key = 1 << 20;
        for (int g = 0; g < 4; g++) {
            if (!((neighbors >> (4 + g)) & 1u)) {
                continue;
            }
            bool cross = detail::leaves_colony(px, py, kDiagDx[g], kDiagDy[g], Q);
            int arrow = detail::diagonal_arrow(tx, ty, g);
            int key = (cross ? 0 : 8) + (arrow >= 0 ? 4 : 0) + g;
            if (key < best_key) {
                best_key = key;
                best_arrow = arrow;
            }
        }
        return best_arrow;
    }
    return detail::move_to_center(px, py, Q);
}

/// Edge leaving vertex (x, y) in direction d.
inline std::size_t edge_towards(const Torus2D &torus, int x, int y, int d) {
    switch (d) {
        case kNorth:
            return planar::v_edge(torus, x, y);
        case kEast:
            return planar::h_edge(torus, x, y);
        case kSouth:
            return planar::v_edge(torus, x, y - 1);
        default:
            return planar::h_edge(torus, x - 1, y);
    }
}

struct FlipDecision {
    std::uint32_t edge = 0;
    std::uint32_t vertex = 0;  // issuing 0-cell
    bool operator==(const FlipDecision &) const = default;
};

inline unsigned neighbor_mask(const Torus2D &torus, const Chain &defects, int x, int y) {
    unsigned m = 0;
    for (int d = 0; d < 4; d++) {
        if (defects.bits[planar::vertex(torus, x + kDirDx[d], y + kDirDy[d])]) {
            m |= 1u << d;
        }
    }
    for (int g = 0; g < 4; g++) {
        if (defects.bits[planar::vertex(torus, x + kDiagDx[g], y + kDiagDy[g])]) {
            m |= 1u << (4 + g);
        }
    }
    return m;
}

/// One synchronous update of all 0-cells against a vertex defect chain.
inline std::vector<FlipDecision> level0_step(const Torus2D &torus, const Chain &defects, int Q) {
    std::vector<FlipDecision> out;
    const int L = torus.L();
    for (int x = 0; x < L; x++) {
        for (int y = 0; y < L; y++) {
            std::size_t v = planar::vertex(torus, x, y);
            if (!defects.bits[v]) {
                continue;
            }
            int d = local_rule(neighbor_mask(torus, defects, x, y), x % Q, y % Q, Q);
            if (d >= 0) {
                out.push_back({static_cast<std::uint32_t>(edge_towards(torus, x, y, d)), static_cast<std::uint32_t>(v)});
            }
        }
    }
    return out;
}

inline bool threshold_record(std::span<const std::uint8_t> record, double f, Strategy strategy, int b) {
    constexpr double kEps = 1e-9;
    if (strategy == Strategy::kNonDivision) {
        int ones = 0;
        for (auto bit : record) {
            ones += bit ? 1 : 0;
        }
        return ones + kEps >= f * static_cast<double>(record.size());
    }
    if (b < 1 || static_cast<std::size_t>(b) * static_cast<std::size_t>(b) != record.size()) {
        throw std::invalid_argument("division strategy needs a record of length b*b.");
    }
    int good_blocks = 0;
    for (int blk = 0; blk < b; blk++) {
        int ones = 0;
        for (int j = 0; j < b; j++) {
            ones += record[static_cast<std::size_t>(blk * b + j)] ? 1 : 0;
        }
        if (ones + kEps >= f * b) {
            good_blocks++;
        }
    }
    return good_blocks + kEps >= f * b;
}

inline bool aggregate_own_defect(std::span<const std::uint8_t> record, const HarringtonConfig &config) {
    if (record.size() != static_cast<std::size_t>(config.U)) {
        throw std::invalid_argument("defect record length " + std::to_string(record.size()) + " differs from U=" +
                                    std::to_string(config.U) + ".");
    }
    return threshold_record(record, config.f_c, config.strategy, config.b);
}

inline bool aggregate_neighbor_defect(std::span<const std::uint8_t> record, const HarringtonConfig &config) {
    if (record.size() != static_cast<std::size_t>(config.U)) {
        throw std::invalid_argument("neighbor record length " + std::to_string(record.size()) + " differs from U=" +
                                    std::to_string(config.U) + ".");
    }
    return threshold_record(record, config.f_n, config.strategy, config.b);
}

/// A level-i move waiting to be executed by the 0-cells.
struct ScheduledCorrection {
    int level = 0;
    long long decided_at = 0;
    long long apply_at = 0;
    std::uint32_t from_cell = 0;  // index on the level-i grid
    std::uint32_t to_cell = 0;
    std::vector<std::uint32_t> edges;
};

struct HarringtonEvents {
    std::function<void(const FlipDecision &)> on_flip;
    std::function<void(const ScheduledCorrection &)> on_scheduled;
    std::function<void(const ScheduledCorrection &)> on_applied;
};

struct CycleReport {
    long long steps = 0;
    std::size_t flips = 0;
    bool cleared = false;  // effective syndrome empty at the end of the cycle
    bool stalled = false;  // tau=inf only: repeated state or step cap
};

/// The full hierarchical automaton for one trial.
///
/// Time counts CA steps. Level i (1 <= i < k) samples the defect bit of its center
/// (i-1)-cell every U^(i-1) steps, decides once per U^i steps, and hands moves to the
/// 0-cells as straight flip paths delivered at the following level-i period end.
/// Level k is a single cell with nowhere to move its defect and is not simulated.
class HarringtonDecoder {
   public:
    HarringtonDecoder(const Torus2D &torus, HarringtonConfig config) : torus_(&torus), config_(config) {
        config_.validate();
        k_ = hierarchy_levels(torus.L(), config_.Q);
        for (int i = 1; i < k_; i++) {
            Level lv;
            lv.level = i;
            lv.span = static_cast<int>(int_pow(config_.Q, i));
            lv.n = torus.L() / lv.span;
            lv.period = int_pow(config_.U, i);
            lv.sample_every = int_pow(config_.U, i - 1);
            lv.lag = lv.span;
            lv.rep_offset = (lv.span - 1) / 2;
            const std::size_t cells = static_cast<std::size_t>(lv.n) * static_cast<std::size_t>(lv.n);
            lv.pending.assign(cells, 0);
            lv.decision.assign(cells, 0);
            lv.ring_size = static_cast<std::size_t>(config_.U + lv.lag / lv.sample_every + 2);
            lv.ring.assign(lv.ring_size, std::vector<std::uint8_t>(cells, 0));
            levels_.push_back(std::move(lv));
        }
    }

    int levels() const {
        return k_;
    }
    long long time() const {
        return t_;
    }
    const HarringtonConfig &config() const {
        return config_;
    }
    const std::vector<ScheduledCorrection> &pending() const {
        return pending_;
    }
    std::size_t corrections_issued() const {
        return issued_;
    }
    void set_events(HarringtonEvents events) {
        events_ = std::move(events);
    }

    /// Latest own decision of every i-cell at level i (1-based).
    const std::vector<std::uint8_t> &decisions(int level) const {
        return levels_.at(static_cast<std::size_t>(level - 1)).decision;
    }

    /// One QEC cycle: tau CA steps against the measured syndrome, flips applied to `error`.
    CycleReport run_cycle(Chain &error, const Chain &measured) {
        if (measured.cell_dim != 0 || measured.size() != torus_->cell_count(0)) {
            throw std::invalid_argument("run_cycle: measured syndrome must be a vertex chain.");
        }
        CycleReport rep;
        Chain syndrome = measured;
        if (!config_.tau_infinite()) {
            for (int s = 0; s < config_.tau; s++) {
                rep.flips += step(error, syndrome);
                rep.steps++;
            }
            rep.cleared = syndrome.empty();
            return rep;
        }
        const long long top_period = levels_.empty() ? 1 : levels_.back().period;
        const long long cap =
            config_.infinite_step_cap > 0 ? config_.infinite_step_cap : 64 * top_period + 4 * torus_->L() + 1000;
        std::unordered_set<std::uint64_t> seen;
        while (!syndrome.empty()) {
            if (rep.steps >= cap) {
                rep.stalled = true;
                break;
            }
            rep.flips += step(error, syndrome);
            rep.steps++;
            if (t_ % top_period == 0 && pending_.empty()) {
                if (!seen.insert(state_hash(syndrome)).second) {
                    rep.stalled = true;
                    break;
                }
            }
        }
        rep.cleared = syndrome.empty();
        return rep;
    }

    /// A single CA step. `syndrome` is the effective syndrome and is updated in place.
    std::size_t step(Chain &error, Chain &syndrome) {
        std::size_t flips = 0;
        for (const auto &f : level0_step(*torus_, syndrome, config_.Q)) {
            flip_edge(error, syndrome, f.edge);
            flips++;
            if (events_.on_flip) {
                events_.on_flip(f);
            }
        }
        t_++;
        flips += apply_due_corrections(error, syndrome);
        for (auto &lv : levels_) {
            if (t_ % lv.sample_every == 0) {
                sample(lv, syndrome);
            }
            if (t_ % lv.period == 0) {
                decide(lv);
            }
        }
        return flips;
    }

   private:
    struct Level {
        int level = 0;
        int span = 1;  // Q^i
        int n = 1;     // i-cells per side
        long long period = 1;
        long long sample_every = 1;
        long long lag = 1;
        int rep_offset = 0;
        std::vector<std::uint8_t> pending;
        std::vector<std::uint8_t> decision;
        std::size_t ring_size = 0;
        std::vector<std::vector<std::uint8_t>> ring;
        long long samples_taken = 0;
    };

    void flip_edge(Chain &error, Chain &syndrome, std::uint32_t edge) {
        error.bits[edge] ^= 1;
        for (auto v : torus_->boundary_of(1, edge)) {
            syndrome.bits[v] ^= 1;
        }
    }

    std::size_t apply_due_corrections(Chain &error, Chain &syndrome) {
        std::size_t flips = 0;
        std::size_t keep = 0;
        for (std::size_t i = 0; i < pending_.size(); i++) {
            auto &c = pending_[i];
            if (c.apply_at != t_) {
                if (keep != i) {
                    pending_[keep] = std::move(c);
                }
                keep++;
                continue;
            }
            for (auto e : c.edges) {
                flip_edge(error, syndrome, e);
            }
            flips += c.edges.size();
            auto &lv = levels_[static_cast<std::size_t>(c.level - 1)];
            lv.pending[c.from_cell] ^= 1;
            lv.pending[c.to_cell] ^= 1;
            if (events_.on_applied) {
                events_.on_applied(c);
            }
        }
        pending_.resize(keep);
        return flips;
    }

    std::uint32_t cell_index(const Level &lv, int cx, int cy) const {
        cx = ((cx % lv.n) + lv.n) % lv.n;
        cy = ((cy % lv.n) + lv.n) % lv.n;
        return static_cast<std::uint32_t>(cx * lv.n + cy);
    }

    void sample(Level &lv, const Chain &syndrome) {
        auto &slot = lv.ring[static_cast<std::size_t>(lv.samples_taken % static_cast<long long>(lv.ring_size))];
        const int c = (config_.Q - 1) / 2;
        for (int cx = 0; cx < lv.n; cx++) {
            for (int cy = 0; cy < lv.n; cy++) {
                std::uint32_t a = cell_index(lv, cx, cy);
                std::uint8_t bit;
                if (lv.level == 1) {
                    bit = syndrome.bits[planar::vertex(*torus_, cx * lv.span + lv.rep_offset, cy * lv.span + lv.rep_offset)];
                } else {
                    const Level &below = levels_[static_cast<std::size_t>(lv.level - 2)];
                    bit = below.decision[cell_index(below, cx * config_.Q + c, cy * config_.Q + c)];
                }
                slot[a] = static_cast<std::uint8_t>(bit ^ lv.pending[a]);
            }
        }
        lv.samples_taken++;
    }

    // Bit of cell `a` as sampled at sample number `j` (0 before the first sample).
    std::uint8_t sampled(const Level &lv, long long j, std::uint32_t a) const {
        if (j < 0 || j >= lv.samples_taken || j < lv.samples_taken - static_cast<long long>(lv.ring_size)) {
            return 0;
        }
        return lv.ring[static_cast<std::size_t>(j % static_cast<long long>(lv.ring_size))][a];
    }

    void decide(Level &lv) {
        const int U = config_.U;
        const int Q = config_.Q;
        const long long last = lv.samples_taken - 1;  // the sample taken at this period end
        std::vector<std::uint8_t> record(static_cast<std::size_t>(U));
        std::vector<std::uint8_t> own(lv.decision.size());
        for (std::uint32_t a = 0; a < own.size(); a++) {
            for (int j = 0; j < U; j++) {
                record[static_cast<std::size_t>(j)] = sampled(lv, last - U + 1 + j, a);
            }
            own[a] = aggregate_own_defect(record, config_) ? 1 : 0;
        }
        lv.decision = own;

        // Neighbour streams arrive lag steps late, i.e. lag/sample_every samples behind
        // (rounded to the sample in force at that moment).
        auto lagged_index = [&](long long j) {
            long long time = (j + 1) * lv.sample_every - lv.lag;
            if (time < lv.sample_every) {
                return static_cast<long long>(-1);
            }
            return time / lv.sample_every - 1;
        };
        std::vector<std::uint32_t> from;
        std::vector<int> dir;
        for (int cx = 0; cx < lv.n; cx++) {
            for (int cy = 0; cy < lv.n; cy++) {
                std::uint32_t a = cell_index(lv, cx, cy);
                if (!own[a]) {
                    continue;
                }
                unsigned mask = 0;
                for (int g = 0; g < 8; g++) {
                    int dx = g < 4 ? kDirDx[g] : kDiagDx[g - 4];
                    int dy = g < 4 ? kDirDy[g] : kDiagDy[g - 4];
                    std::uint32_t nb = cell_index(lv, cx + dx, cy + dy);
                    for (int j = 0; j < U; j++) {
                        record[static_cast<std::size_t>(j)] = sampled(lv, lagged_index(last - U + 1 + j), nb);
                    }
                    if (aggregate_neighbor_defect(record, config_)) {
                        mask |= 1u << g;
                    }
                }
                int d = local_rule(mask, cx % Q, cy % Q, Q);
                if (d >= 0) {
                    from.push_back(a);
                    dir.push_back(d);
                }
            }
        }
        for (std::size_t m = 0; m < from.size(); m++) {
            schedule(lv, from[m], dir[m]);
        }
    }

    void schedule(Level &lv, std::uint32_t a, int d) {
        const int cx = static_cast<int>(a) / lv.n;
        const int cy = static_cast<int>(a) % lv.n;
        ScheduledCorrection c;
        c.level = lv.level;
        c.decided_at = t_;
        c.apply_at = t_ + lv.period;
        c.from_cell = a;
        c.to_cell = cell_index(lv, cx + kDirDx[d], cy + kDirDy[d]);
        int x = cx * lv.span + lv.rep_offset;
        int y = cy * lv.span + lv.rep_offset;
        c.edges.reserve(static_cast<std::size_t>(lv.span));
        for (int s = 0; s < lv.span; s++) {
            c.edges.push_back(static_cast<std::uint32_t>(edge_towards(*torus_, x, y, d)));
            x += kDirDx[d];
            y += kDirDy[d];
        }
        lv.pending[c.from_cell] ^= 1;
        lv.pending[c.to_cell] ^= 1;
        issued_++;
        if (events_.on_scheduled) {
            events_.on_scheduled(c);
        }
        pending_.push_back(std::move(c));
    }

    std::uint64_t state_hash(const Chain &syndrome) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        auto mix = [&](std::uint64_t v) {
            h ^= v;
            h *= 0x100000001b3ULL;
        };
        for (std::size_t i = 0; i < syndrome.size(); i++) {
            if (syndrome.bits[i]) {
                mix(i + 1);
            }
        }
        for (const auto &lv : levels_) {
            mix(0xABCDEFULL + static_cast<std::uint64_t>(lv.level));
            for (std::size_t a = 0; a < lv.decision.size(); a++) {
                if (lv.decision[a]) {
                    mix(a + 1);
                }
            }
        }
        return h;
    }

    const Torus2D *torus_;
    HarringtonConfig config_;
    int k_ = 1;
    long long t_ = 0;
    std::vector<Level> levels_;
    std::vector<ScheduledCorrection> pending_;
    std::size_t issued_ = 0;
    HarringtonEvents events_;
};

}  // namespace toric
