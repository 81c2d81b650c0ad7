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

#include "toric/fitting.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace toric;

namespace {

std::vector<FitPoint> eq1_data(double A, double B, int U) {
    std::vector<FitPoint> d;
    for (int L : {3, 9, 27}) {
        for (double p : {0.001, 0.002}) {
            d.push_back({L, p, eq1_predict(A, B, U, log_base_exact(L, 3), p), 0});
        }
    }
    return d;
}

// Quadratic scaling data around p_c = 0.021, nu = 1.1 with 1% multiplicative noise.
std::vector<FitPoint> eq2_data(std::uint64_t seed, double noise = 0.01) {
    std::mt19937_64 g(seed);
    std::normal_distribution<double> nd(0, 1);
    std::vector<FitPoint> e;
    for (int L : {8, 9, 10, 11}) {
        for (int i = 0; i < 7; i++) {
            const double p = 0.018 + 0.001 * i;
            const double x = (p - 0.021) * std::pow(L, 1 / 1.1);
            const double T = 2.0 - 30 * x + 90 * x * x;
            e.push_back({L, p, T * (1 + noise * nd(g)), noise * T});
        }
    }
    return e;
}

Eq2Options quick() {
    Eq2Options o;
    o.bootstrap = 0;
    return o;
}

}  // namespace

TEST(Eq1, RecoversExactParameters) {
    auto f = fit_eq1(eq1_data(1000, 750, 10), 10, 3);
    EXPECT_NEAR(f.A / 1000, 1.0, 1e-6);
    EXPECT_NEAR(f.B / 750, 1.0, 1e-6);
    EXPECT_LT(f.residual_norm, 1e-9);
    EXPECT_DOUBLE_EQ(f.p_c, 1.0 / f.B);
}

TEST(Eq1, ThresholdIsReciprocalOfB) {
    EXPECT_NEAR(fit_eq1(eq1_data(200, 750, 10), 10, 3).p_c, 0.001333, 1e-6);
    EXPECT_NEAR(fit_eq1(eq1_data(200, 25, 10), 10, 3).p_c, 0.04, 1e-9);
}

TEST(Eq1, PredictMatchesClosedForm) {
    // k = 2: T = U^2 / (A B^2) p^-4.
    EXPECT_NEAR(eq1_predict(3, 5, 10, 2, 0.1), 100.0 / (3 * 25) * 1e4, 1e-6);
    EXPECT_NEAR(eq1_predict(3, 5, 10, 1, 0.1), 10.0 / 3 * 100, 1e-9);
}

TEST(Eq1, SingleDepthIsRankDeficient) {
    std::vector<FitPoint> d;
    for (double p : {0.001, 0.002, 0.003}) {
        d.push_back({9, p, eq1_predict(1, 100, 10, 2, p), 0});
    }
    EXPECT_THROW(fit_eq1(d, 10, 3), std::domain_error);
    EXPECT_THROW(fit_eq1({d[0]}, 10, 3), std::invalid_argument);
    d.push_back({10, 0.001, 5, 0});
    EXPECT_THROW(fit_eq1(d, 10, 3), std::invalid_argument);
}

TEST(Eq2, RecoversThresholdFromNoisyData) {
    for (std::uint64_t seed : {5, 6, 7}) {
        auto f = fit_eq2(eq2_data(seed), quick());
        EXPECT_NEAR(f.p_c, 0.021, 0.0005) << "seed " << seed;
        EXPECT_NEAR(f.nu, 1.1, 0.15) << "seed " << seed;
    }
}

TEST(Eq2, ExactDataIsFitExactly) {
    auto f = fit_eq2(eq2_data(1, 0.0), quick());
    EXPECT_NEAR(f.p_c, 0.021, 1e-7);
    EXPECT_NEAR(f.nu, 1.1, 1e-4);
    EXPECT_NEAR(f.T_c, 2.0, 1e-5);
    EXPECT_NEAR(f.A, -30.0, 1e-3);
    EXPECT_NEAR(f.B, 90.0, 1e-2);
    ASSERT_EQ(f.x.size(), 28u);
}

TEST(Eq2, OptimumIsNoWorseThanAnyGridSeed) {
    auto d = eq2_data(9);
    Eq2Options o = quick();
    auto f = fit_eq2(d, o);
    EXPECT_NEAR(f.objective, eq2_objective_at(d, f.p_c, f.nu), 1e-12 * std::max(1.0, f.objective));
    for (int i = 0; i < o.grid_pc; i++) {
        const double pc = 0.018 + 0.006 * (i + 0.5) / o.grid_pc;
        for (int j = 0; j < o.grid_nu; j++) {
            const double nu = o.nu_min * std::pow(o.nu_max / o.nu_min, (j + 0.5) / o.grid_nu);
            ASSERT_LE(f.objective, eq2_objective_at(d, pc, nu) * (1 + 1e-12));
        }
    }
}

TEST(Eq2, ScalingTScalesLinearParametersOnly) {
    auto d = eq2_data(11);
    auto f = fit_eq2(d, quick());
    const double c = 7.5;
    for (auto &pt : d) {
        pt.T *= c;
        pt.stderr_T *= c;
    }
    auto g = fit_eq2(d, quick());
    EXPECT_NEAR(g.p_c, f.p_c, 1e-7);
    EXPECT_NEAR(g.nu, f.nu, 1e-4 * f.nu);
    EXPECT_NEAR(g.T_c, c * f.T_c, 1e-4 * std::abs(c * f.T_c));
    EXPECT_NEAR(g.A, c * f.A, 1e-3 * std::abs(c * f.A));
    EXPECT_NEAR(g.B, c * f.B, 1e-3 * std::abs(c * f.B));
}

TEST(Eq2, SingleLatticeSizeRaisesRankError) {
    std::vector<FitPoint> one;
    for (const auto &pt : eq2_data(5)) {
        if (pt.L == 8) {
            one.push_back(pt);
        }
    }
    EXPECT_THROW(fit_eq2(one, quick()), std::domain_error);
    auto two_p = eq2_data(5);
    std::erase_if(two_p, [](const FitPoint &pt) { return pt.p > 0.0195; });
    EXPECT_THROW(fit_eq2(two_p, quick()), std::domain_error);
}

TEST(Eq2, BootstrapGivesSmallSpreadOnCleanData) {
    Eq2Options o;
    o.bootstrap = 40;
    o.seed = 3;
    auto f = fit_eq2(eq2_data(5), o);
    EXPECT_GT(f.bootstrap_used, 30);
    EXPECT_GT(f.err_p_c, 0.0);
    EXPECT_LT(f.err_p_c, 0.001);
    auto g = fit_eq2(eq2_data(5), o);
    EXPECT_EQ(f.err_p_c, g.err_p_c);
}
