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

// Acceptance runner: one PASS/FAIL/SKIP line per criterion. The Monte-Carlo
// crossover checks (5 and 10) are slow and only run with --full.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "toric/box.hpp"
#include "toric/decoders4d.hpp"
#include "toric/experiment.hpp"
#include "toric/fitting.hpp"
#include "toric/harrington.hpp"
#include "toric/matching.hpp"
#include "toric/noise.hpp"
#include "toric/report.hpp"

using namespace toric;

namespace {

enum class Verdict { kPass, kFail, kSkip };

struct Outcome {
    Verdict verdict = Verdict::kPass;
    std::string detail;
};

struct Options {
    bool full = false;
    int workers = 1;
    long long trials_5 = 200;
    long long trials_10 = 300;
};

Outcome pass_if(bool ok, std::string detail) {
    return {ok ? Verdict::kPass : Verdict::kFail, std::move(detail)};
}

std::string fmt(const char *f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), f, a);
    return buf;
}

std::string mean_pm(const MemoryTimeResult &r) {
    std::ostringstream os;
    os.precision(4);
    os << r.mean_T << "+-" << r.stderr_T;
    return os.str();
}

// Signed distance of (a - b) in units of the combined standard error.
double z_score(const MemoryTimeResult &a, const MemoryTimeResult &b) {
    const double s = std::hypot(a.stderr_T, b.stderr_T);
    return s > 0 ? (a.mean_T - b.mean_T) / s : (a.mean_T > b.mean_T ? INFINITY : (a.mean_T < b.mean_T ? -INFINITY : 0));
}

// 1. Chain-complex invariants at L = 2..5.
template <int D>
bool structural(int L) {
    Torus<D> t(L);
    for (int k = 0; k <= D; k++) {
        for (std::size_t i = 0; i < t.cell_count(k); i++) {
            if (t.index_of(t.cell_at(k, i)) != i) {
                return false;
            }
            if (k >= 2) {
                Chain c = t.zero_chain(k);
                c.flip(i);
                if (!t.boundary_of_chain(t.boundary_of_chain(c)).empty()) {
                    return false;
                }
            }
        }
    }
    TrialRng rng(101, static_cast<std::uint64_t>(L * 10 + D));
    for (int rep = 0; rep < 50; rep++) {
        Chain e = t.zero_chain(D / 2);
        flip_bernoulli(e, 0.2, rng);
        if (D == 4 && !t.boundary_of_chain(t.syndrome_of(e)).empty()) {
            return false;
        }
        // Homology linearity on random cycles: boundaries plus random generators.
        Chain a = t.boundary_of_chain([&] {
            Chain c = t.zero_chain(D / 2 + 1);
            flip_bernoulli(c, 0.3, rng);
            return c;
        }());
        Chain b = a;
        b.clear();
        if constexpr (D == 4) {
            const Torus4D &t4 = t;
            for (int mu = 0; mu < 4; mu++) {
                for (int nu = mu + 1; nu < 4; nu++) {
                    if (rng.bernoulli(0.5)) {
                        a ^= oracle::plane_4d(t4, mu, nu, {1, 0, 1, 0});
                    }
                    if (rng.bernoulli(0.5)) {
                        b ^= oracle::plane_4d(t4, mu, nu, {0, 1, 0, 1});
                    }
                }
            }
        } else {
            const Torus2D &t2 = t;
            if (rng.bernoulli(0.5)) {
                for (int x = 0; x < L; x++) {
                    a.flip(planar::h_edge(t2, x, 1 % L));
                }
            }
            if (rng.bernoulli(0.5)) {
                for (int y = 0; y < L; y++) {
                    b.flip(planar::v_edge(t2, 0, y));
                }
            }
        }
        auto ha = t.homology_class(a);
        auto hb = t.homology_class(b);
        auto hab = t.homology_class(a ^ b);
        for (std::size_t i = 0; i < ha.size(); i++) {
            if (hab[i] != (ha[i] ^ hb[i])) {
                return false;
            }
        }
    }
    return true;
}

Outcome criterion_1(const Options &) {
    for (int L : {2, 3, 4, 5}) {
        if (!structural<2>(L) || !structural<4>(L)) {
            return {Verdict::kFail, "invariant broken at L=" + std::to_string(L)};
        }
    }
    return {Verdict::kPass, "boundary^2=0, closure, linearity, round-trips at L=2..5"};
}

Outcome criterion_2(const Options &) {
    TrialRng rng(202, 1);
    int mismatches = 0;
    for (int rep = 0; rep < 10000; rep++) {
        const int L = 3 + static_cast<int>(rng.below(10));
        const int n = std::min(2 * (1 + static_cast<int>(rng.below(5))), (L * L) / 2 * 2);
        DefectSet d;
        while (static_cast<int>(d.size()) < n) {
            Coord2 c{static_cast<int>(rng.below(static_cast<std::uint64_t>(L))),
                     static_cast<int>(rng.below(static_cast<std::uint64_t>(L)))};
            if (std::find(d.begin(), d.end(), c) == d.end()) {
                d.push_back(c);
            }
        }
        auto inst = MatchingInstance::torus(d, L);
        Pairing p = mwm(inst);
        if (!oracle::is_perfect(inst, p) || std::abs(p.total_weight - oracle::matching_weight(inst)) > 1e-9) {
            mismatches++;
        }
    }
    for (int rep = 0; rep < 1000; rep++) {
        const int n = 2 * (1 + static_cast<int>(rng.below(5)));
        std::vector<std::array<int, 4>> pts;
        for (int i = 0; i < n; i++) {
            pts.push_back({static_cast<int>(rng.below(4)), static_cast<int>(rng.below(4)),
                           static_cast<int>(rng.below(4)), static_cast<int>(rng.below(4))});
        }
        auto inst = MatchingInstance::euclidean<4>(pts);
        Pairing p = mwm(inst);
        if (!oracle::is_perfect(inst, p) || std::abs(p.total_weight - oracle::matching_weight(inst)) > 1e-9) {
            mismatches++;
        }
    }
    return pass_if(mismatches == 0, std::to_string(mismatches) + " mismatches in 10000 torus + 1000 in-box instances");
}

Outcome criterion_3(const Options &) {
    Torus2D t(5);
    Chain e = t.zero_chain(1);
    e.flip(planar::v_edge(t, 0, 0));
    e.flip(planar::v_edge(t, 0, 1));
    e.flip(planar::h_edge(t, 0, 2));
    e.flip(planar::h_edge(t, 2, 2));
    e.flip(planar::v_edge(t, 3, 1));
    e.flip(planar::v_edge(t, 3, 0));
    const bool passes = rough_test(t, e);
    const bool fails_mwm = logical_failure_2d(t, e, false);
    return pass_if(passes && fails_mwm, std::string("rough test ") + (passes ? "passes" : "fails") + ", full MWM " +
                                            (fails_mwm ? "logical failure" : "no failure"));
}

Outcome criterion_4(const Options &) {
    Torus2D t(9);
    int bad = 0;
    for (std::size_t edge = 0; edge < t.cell_count(1); edge++) {
        HarringtonDecoder d(t, HarringtonConfig{});
        Chain err = t.zero_chain(1);
        err.flip(edge);
        bool cleared = false;
        for (int cycle = 0; cycle < 2 && !cleared; cycle++) {
            d.run_cycle(err, t.syndrome_of(err));
            cleared = t.syndrome_of(err).empty();
        }
        if (!cleared || logical_failure_2d(t, err, false)) {
            bad++;
        }
    }
    return pass_if(bad == 0, std::to_string(t.cell_count(1) - static_cast<std::size_t>(bad)) + "/" +
                                 std::to_string(t.cell_count(1)) + " single errors removed within 2 cycles");
}

ExperimentConfig harrington_point(int L, double p, long long trials, double q, int tau, long long max_cycles) {
    ExperimentConfig c;
    c.code = CodeKind::k2D;
    c.L = L;
    c.noise = {p, q};
    c.harrington.tau = tau;
    c.trials = trials;
    c.seed = 500 + static_cast<std::uint64_t>(L);
    c.max_cycles = max_cycles;
    return c;
}

Outcome criterion_5(const Options &o) {
    if (!o.full) {
        return {Verdict::kSkip, "hours-scale Monte Carlo; run with --full"};
    }
    std::ostringstream d;
    bool ok = true;
    for (auto [p, want_larger] : {std::pair{0.001, true}, std::pair{0.005, false}}) {
        auto r3 = monte_carlo(harrington_point(3, p, o.trials_5, p, 1, 10000000), o.workers);
        auto r9 = monte_carlo(harrington_point(9, p, o.trials_5, p, 1, 10000000), o.workers);
        const double z = z_score(r9, r3);
        ok &= want_larger ? z > 2 : z < -2;
        d << "p=" << p << ": T(9)=" << mean_pm(r9) << " T(3)=" << mean_pm(r3) << " z=" << fmt("%.2f", z)
          << " censored " << r3.n_censored + r9.n_censored << "; ";
    }
    d << o.trials_5 << " trials per point";
    return pass_if(ok, d.str());
}

Outcome criterion_6(const Options &) {
    auto lo = monte_carlo(harrington_point(9, 0.02, 200, 0.0, HarringtonConfig::kTauInfinite, 10000000));
    auto hi = monte_carlo(harrington_point(9, 0.06, 200, 0.0, HarringtonConfig::kTauInfinite, 10000000));
    const double ratio = lo.mean_T / hi.mean_T;
    return pass_if(ratio >= 10, "T(2%)=" + mean_pm(lo) + " T(6%)=" + mean_pm(hi) + " ratio " + fmt("%.1f", ratio) +
                                    ", censored " + std::to_string(lo.n_censored));
}

Outcome criterion_7(const Options &) {
    std::ostringstream d;
    bool ok = box_face_count(3) == 864 && BoxComplex(3).face_count() == 864;
    for (int L : {8, 9, 10, 11}) {
        const auto n = partition_boxes(L, 3, {0, 0, 0, 0}).size();
        ok &= n == 16;
        d << "L=" << L << ":" << n << " ";
    }
    d << "boxes; " << box_face_count(3) << " faces per box";
    return pass_if(ok, d.str());
}

Outcome criterion_8(const Options &) {
    BoxComplex cx(2);
    oracle::SmallSurface bf(cx);
    TrialRng rng(808, 8);
    int mismatches = 0;
    for (int rep = 0; rep < 500; rep++) {
        std::set<int> fs;
        const int k = 1 + static_cast<int>(rng.below(3));
        while (static_cast<int>(fs.size()) < k) {
            fs.insert(static_cast<int>(rng.below(static_cast<std::uint64_t>(cx.face_count()))));
        }
        auto target = oracle::box_boundary(cx, {fs.begin(), fs.end()});
        auto r = min_surface(cx, target);
        if (oracle::box_boundary(cx, r) != target || static_cast<int>(r.size()) != bf.weight(target)) {
            mismatches++;
        }
    }
    return pass_if(mismatches == 0, std::to_string(mismatches) + " mismatches in 500 instances (l=2, <=3 faces)");
}

Outcome criterion_9(const Options &) {
    std::ostringstream d;
    bool ok = true;
    {
        Torus4D t(8);
        SweepGeometry geo(t);
        Chain s = t.syndrome_of(oracle::strip_4d(t, 1, 2));
        const Chain s0 = s;
        TrialRng rng(909, 1);
        std::size_t flips = 0;
        for (int i = 0; i < 100; i++) {
            flips += dklp_sweep(geo, s, 1, rng).weight();
        }
        ok &= flips == 0 && s == s0;
        d << "DKLP width-2 strip: " << flips << " flips; ";
    }
    {
        Torus4D t(7);
        SweepGeometry geo(t);
        Chain s = t.syndrome_of(oracle::strip_4d(t, 2, 1));
        const Chain s0 = s;
        std::size_t flips = 0;
        for (int i = 0; i < 100; i++) {
            flips += toom_sweep(geo, s, 1).weight();
        }
        ok &= flips == 0 && s == s0;
        d << "Toom full column: " << flips << " flips; ";
    }
    {
        Torus4D t(9);
        Decoder4D dec(t, DecoderKind::kHastings, HastingsConfig{3, 5}, SweepConfig{});
        Chain e = oracle::strip_4d(t, 0, 3);
        TrialRng rng(909, 3);
        const std::size_t corr = dec.run_cycle(e, t.syndrome_of(e), rng).weight();
        ok &= corr == 0;
        d << "Hastings width-3 strip: " << corr << " corrected faces over m=5";
    }
    return pass_if(ok, d.str());
}

Outcome criterion_11(const Options &) {
    Torus4D t(4);
    SweepGeometry geo(t);
    TrialRng rng(1111, 11);
    long long violations = 0;
    for (int it = 0; it < 100000; it++) {
        Chain e = t.zero_chain(2);
        flip_bernoulli(e, 0.02 + 0.4 * rng.uniform(), rng);
        Chain s = t.syndrome_of(e);
        Chain m = t.zero_chain(1);
        flip_bernoulli(m, 0.1 * rng.uniform(), rng);
        s ^= m;
        const int rank = static_cast<int>(rng.below(6));
        const int colour = static_cast<int>(rng.below(static_cast<std::uint64_t>(geo.colour_count())));
        const std::size_t before = s.weight();
        Chain flips = t.zero_chain(2);
        dklp_update_subset(geo, geo.subset(rank, colour), flips, s, rng);
        violations += s.weight() > before ? 1 : 0;
    }
    return pass_if(violations == 0, std::to_string(violations) + " weight increases over 100000 states");
}

Outcome criterion_10(const Options &o) {
    if (!o.full) {
        return {Verdict::kSkip, "hours-scale Monte Carlo; run with --full"};
    }
    std::ostringstream d;
    bool ok = true;
    for (auto [p, want_larger] : {std::pair{0.012, true}, std::pair{0.022, false}}) {
        MemoryTimeResult r[2];
        for (int i = 0; i < 2; i++) {
            ExperimentConfig c;
            c.code = CodeKind::k4D;
            c.decoder = DecoderKind::kHastings;
            c.L = 8 + i;
            c.noise = {p, p};
            c.hastings = HastingsConfig{3, 5};
            c.trials = o.trials_10;
            c.seed = 1000 + static_cast<std::uint64_t>(c.L);
            c.max_cycles = 1000000;
            r[i] = monte_carlo(c, o.workers);
        }
        const double z = z_score(r[1], r[0]);
        ok &= want_larger ? z > 2 : z < -2;
        d << "p=" << p << ": T(9)=" << mean_pm(r[1]) << " T(8)=" << mean_pm(r[0]) << " z=" << fmt("%.2f", z)
          << " (stuck/log L8 " << r[0].stats.n_res << "/" << r[0].stats.n_log << ", L9 " << r[1].stats.n_res << "/"
          << r[1].stats.n_log << "); ";
    }
    d << o.trials_10 << " trials per point";
    return pass_if(ok, d.str());
}

Outcome criterion_12(const Options &) {
    std::vector<FitPoint> d1;
    for (int L : {3, 9, 27}) {
        for (double p : {0.001, 0.002, 0.003}) {
            d1.push_back({L, p, eq1_predict(1234.5, 750, 10, log_base_exact(L, 3), p), 0});
        }
    }
    auto f1 = fit_eq1(d1, 10, 3);
    const bool eq1_ok = std::abs(f1.A / 1234.5 - 1) < 5e-7 && std::abs(f1.B / 750 - 1) < 5e-7;

    std::mt19937_64 g(12);
    std::normal_distribution<double> nd(0, 1);
    std::vector<FitPoint> d2;
    for (int L : {8, 9, 10, 11}) {
        for (int i = 0; i < 7; i++) {
            const double p = 0.018 + 0.001 * i;
            const double x = (p - 0.021) * std::pow(L, 1 / 1.1);
            const double T = 2.0 - 30 * x + 90 * x * x;
            d2.push_back({L, p, T * (1 + 0.01 * nd(g)), 0.01 * T});
        }
    }
    Eq2Options opt;
    opt.bootstrap = 100;
    auto f2 = fit_eq2(d2, opt);
    const bool eq2_ok = std::abs(f2.p_c - 0.021) <= 0.0005;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "eq1 A=%.7g B=%.7g (true 1234.5, 750); eq2 p_c=%.5f+-%.5f (true 0.021), nu=%.3f",
                  f1.A, f1.B, f2.p_c, f2.err_p_c, f2.nu);
    return pass_if(eq1_ok && eq2_ok, buf);
}

std::string trials_text(const ExperimentConfig &c, int workers) {
    auto r = monte_carlo(c, workers);
    std::ostringstream os;
    write_trials_header(os);
    for (std::size_t i = 0; i < r.trials.size(); i++) {
        write_trial_row(os, 0, static_cast<long long>(i), c, r.trials[i]);
    }
    write_results_header(os);
    write_results_row(os, c, r);
    return os.str();
}

Outcome criterion_13(const Options &) {
    std::vector<ExperimentConfig> runs;
    {
        ExperimentConfig c;
        c.L = 9;
        c.noise = {0.01, 0.01};
        c.trials = 24;
        c.seed = 13;
        runs.push_back(c);
    }
    for (auto d : {DecoderKind::kToom, DecoderKind::kDklp, DecoderKind::kHastings}) {
        ExperimentConfig c;
        c.code = CodeKind::k4D;
        c.decoder = d;
        c.L = d == DecoderKind::kHastings ? 8 : 4;
        c.noise = {0.02, 0.02};
        c.trials = d == DecoderKind::kHastings ? 6 : 16;
        c.max_cycles = d == DecoderKind::kHastings ? 30 : 5000;
        c.seed = 13;
        runs.push_back(c);
    }
    int differing = 0;
    for (const auto &c : runs) {
        const std::string one = trials_text(c, 1);
        for (int w : {2, 4}) {
            differing += trials_text(c, w) != one ? 1 : 0;
        }
    }
    return pass_if(differing == 0, std::to_string(differing) +
                                       " differing outputs across workers {1,2,4} for 2d harrington and 4d toom/dklp/hastings");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Acceptance criteria runner"};
    Options o;
    std::vector<int> only;
    app.add_flag("--full", o.full, "Also run the hours-scale Monte-Carlo criteria (5 and 10)");
    app.add_option("--workers", o.workers, "Worker threads for Monte-Carlo criteria")->check(CLI::PositiveNumber);
    app.add_option("--trials-5", o.trials_5, "Trials per point for criterion 5")->check(CLI::Range(200LL, 100000000LL));
    app.add_option("--trials-10", o.trials_10, "Trials per point for criterion 10")->check(CLI::Range(300LL, 100000000LL));
    app.add_option("--only", only, "Run only these criteria");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<int, std::function<Outcome(const Options &)>>> criteria{
        {1, criterion_1},   {2, criterion_2},   {3, criterion_3},   {4, criterion_4},  {5, criterion_5},
        {6, criterion_6},   {7, criterion_7},   {8, criterion_8},   {9, criterion_9},  {10, criterion_10},
        {11, criterion_11}, {12, criterion_12}, {13, criterion_13},
    };
    int failed = 0;
    for (const auto &[n, run] : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), n) == only.end()) {
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = run(o);
        } catch (const std::exception &e) {
            out = {Verdict::kFail, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const char *v = out.verdict == Verdict::kPass ? "PASS" : out.verdict == Verdict::kFail ? "FAIL" : "SKIP";
        std::printf("criterion %2d: %s  %s [%.1fs]\n", n, v, out.detail.c_str(), secs);
        std::fflush(stdout);
        failed += out.verdict == Verdict::kFail ? 1 : 0;
    }
    return failed == 0 ? 0 : 1;
}
