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

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multifit.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "toric/rng.hpp"

namespace toric {

struct FitPoint {
    int L = 0;
    double p = 0;
    double T = 0;
    double stderr_T = 0;  // 0 means unknown; the point is then weighted uniformly
};

namespace detail {

struct GslMatrix {
    explicit GslMatrix(std::size_t r, std::size_t c) : m(gsl_matrix_alloc(r, c)) {
    }
    ~GslMatrix() {
        gsl_matrix_free(m);
    }
    GslMatrix(const GslMatrix &) = delete;
    GslMatrix &operator=(const GslMatrix &) = delete;
    gsl_matrix *m;
};

struct GslVector {
    explicit GslVector(std::size_t n) : v(gsl_vector_alloc(n)) {
    }
    ~GslVector() {
        gsl_vector_free(v);
    }
    GslVector(const GslVector &) = delete;
    GslVector &operator=(const GslVector &) = delete;
    gsl_vector *v;
};

// Turns GSL's abort-on-error default into return codes for the lifetime of the guard.
struct GslErrorGuard {
    GslErrorGuard() : previous(gsl_set_error_handler_off()) {
    }
    ~GslErrorGuard() {
        gsl_set_error_handler(previous);
    }
    gsl_error_handler_t *previous;
};

struct LinearFit {
    std::vector<double> coef;
    double chisq = 0;
    std::size_t rank = 0;
};

// Weighted least squares y ~ X c through a truncated SVD, reporting the effective rank.
inline LinearFit weighted_linear(const std::vector<std::vector<double>> &X, const std::vector<double> &y,
                                 const std::vector<double> &w) {
    const std::size_t n = y.size();
    const std::size_t k = X.empty() ? 0 : X.front().size();
    GslErrorGuard guard;
    GslMatrix A(n, k);
    GslVector yy(n);
    GslVector ww(n);
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = 0; j < k; j++) {
            gsl_matrix_set(A.m, i, j, X[i][j]);
        }
        gsl_vector_set(yy.v, i, y[i]);
        gsl_vector_set(ww.v, i, w[i]);
    }
    GslVector c(k);
    GslMatrix cov(k, k);
    std::unique_ptr<gsl_multifit_linear_workspace, decltype(&gsl_multifit_linear_free)> work(
        gsl_multifit_linear_alloc(n, k), &gsl_multifit_linear_free);
    LinearFit out;
    std::size_t rank = 0;
    int status = gsl_multifit_wlinear_tsvd(A.m, ww.v, yy.v, 1e-10, c.v, cov.m, &out.chisq, &rank, work.get());
    if (status != GSL_SUCCESS) {
        throw std::runtime_error(std::string("linear least squares failed: ") + gsl_strerror(status));
    }
    out.rank = rank;
    out.coef.resize(k);
    for (std::size_t j = 0; j < k; j++) {
        out.coef[j] = gsl_vector_get(c.v, j);
    }
    return out;
}

inline std::vector<double> point_weights(const std::vector<FitPoint> &data, bool log_scale) {
    bool all_known = !data.empty();
    for (const auto &d : data) {
        all_known = all_known && d.stderr_T > 0;
    }
    std::vector<double> w(data.size(), 1.0);
    if (all_known) {
        for (std::size_t i = 0; i < data.size(); i++) {
            // On the log scale the error of ln T is stderr/T.
            double s = log_scale ? data[i].stderr_T / data[i].T : data[i].stderr_T;
            w[i] = 1.0 / (s * s);
        }
    }
    return w;
}

}  // namespace detail

/// Concatenation ansatz T = U^k / (A B^(2^k - 2)) p^(-2^k), with k = log_Q(L).
struct Eq1Fit {
    double A = 0;
    double B = 0;
    double p_c = 0;  // 1/B
    double residual_norm = 0;
    int U = 0;
    int Q = 0;
};

inline int log_base_exact(int L, int Q) {
    int k = 0;
    long long v = 1;
    while (v < L) {
        v *= Q;
        k++;
    }
    if (v != L) {
        throw std::invalid_argument("L=" + std::to_string(L) + " is not a power of Q=" + std::to_string(Q) + ".");
    }
    return k;
}

inline double eq1_predict(double A, double B, int U, int k, double p) {
    const double two_k = std::ldexp(1.0, k);
    return std::pow(static_cast<double>(U), k) / (A * std::pow(B, two_k - 2)) * std::pow(p, -two_k);
}

inline Eq1Fit fit_eq1(const std::vector<FitPoint> &data, int U, int Q) {
    if (data.size() < 2) {
        throw std::invalid_argument("fit_eq1 needs at least two data points.");
    }
    std::vector<std::vector<double>> X;
    std::vector<double> y;
    for (const auto &d : data) {
        if (!(d.T > 0) || !(d.p > 0)) {
            throw std::invalid_argument("fit_eq1 needs T > 0 and p > 0 at every point.");
        }
        const int k = log_base_exact(d.L, Q);
        const double two_k = std::ldexp(1.0, k);
        // ln T - k ln U + 2^k ln p = -ln A - (2^k - 2) ln B
        y.push_back(std::log(d.T) - k * std::log(static_cast<double>(U)) + two_k * std::log(d.p));
        X.push_back({-1.0, -(two_k - 2)});
    }
    auto lf = detail::weighted_linear(X, y, detail::point_weights(data, true));
    if (lf.rank < 2) {
        throw std::domain_error("fit_eq1: design is rank deficient (all points share one hierarchy depth).");
    }
    Eq1Fit out;
    out.A = std::exp(lf.coef[0]);
    out.B = std::exp(lf.coef[1]);
    out.p_c = 1.0 / out.B;
    out.residual_norm = std::sqrt(lf.chisq);
    out.U = U;
    out.Q = Q;
    return out;
}

/// Finite-size-scaling quadratic T = T_c + A x + B x^2 with x = (p - p_c) L^(1/nu).
struct Eq2Fit {
    double T_c = 0;
    double p_c = 0;
    double nu = 0;
    double A = 0;
    double B = 0;
    double objective = 0;  // weighted residual sum of squares
    std::vector<double> x;  // scaling variable per input point
    // Bootstrap standard deviations.
    double err_T_c = 0;
    double err_p_c = 0;
    double err_nu = 0;
    double err_A = 0;
    double err_B = 0;
    int bootstrap_used = 0;
};

struct Eq2Options {
    int grid_pc = 25;
    int grid_nu = 25;
    double nu_min = 0.2;
    double nu_max = 4.0;
    int max_iterations = 4000;
    int bootstrap = 1000;
    std::uint64_t seed = 1;
};

namespace detail {

struct Eq2Inner {
    std::array<double, 3> coef{};  // T_c, A, B
    double objective = std::numeric_limits<double>::infinity();
};

inline Eq2Inner eq2_inner(const std::vector<FitPoint> &data, const std::vector<double> &w, double p_c, double nu) {
    Eq2Inner r;
    if (!(nu > 0) || !std::isfinite(p_c)) {
        return r;
    }
    std::vector<std::vector<double>> X;
    std::vector<double> y;
    for (const auto &d : data) {
        const double x = (d.p - p_c) * std::pow(static_cast<double>(d.L), 1.0 / nu);
        X.push_back({1.0, x, x * x});
        y.push_back(d.T);
    }
    try {
        auto lf = weighted_linear(X, y, w);
        r.coef = {lf.coef[0], lf.coef[1], lf.coef[2]};
        r.objective = lf.chisq;
    } catch (const std::runtime_error &) {
    }
    return r;
}

struct Eq2Params {
    const std::vector<FitPoint> *data;
    const std::vector<double> *w;
};

inline double eq2_objective(const gsl_vector *v, void *params) {
    auto *pp = static_cast<Eq2Params *>(params);
    const double p_c = gsl_vector_get(v, 0);
    const double nu = std::exp(gsl_vector_get(v, 1));
    double o = eq2_inner(*pp->data, *pp->w, p_c, nu).objective;
    return std::isfinite(o) ? o : GSL_POSINF;
}

inline void check_eq2_design(const std::vector<FitPoint> &data) {
    std::set<int> Ls;
    std::set<double> ps;
    for (const auto &d : data) {
        Ls.insert(d.L);
        ps.insert(d.p);
    }
    if (Ls.size() < 2) {
        throw std::domain_error("fit_eq2: rank deficient, need at least two distinct L.");
    }
    if (ps.size() < 3) {
        throw std::domain_error("fit_eq2: rank deficient, need at least three distinct p.");
    }
}

// Nelder-Mead over (p_c, ln nu) from a starting point; returns the optimum.
inline std::array<double, 2> eq2_simplex(const std::vector<FitPoint> &data, const std::vector<double> &w, double p_c0,
                                         double nu0, double p_span, int max_iterations) {
    GslErrorGuard guard;
    Eq2Params params{&data, &w};
    gsl_multimin_function f;
    f.n = 2;
    f.f = &eq2_objective;
    f.params = &params;
    GslVector x(2);
    GslVector step(2);
    gsl_vector_set(x.v, 0, p_c0);
    gsl_vector_set(x.v, 1, std::log(nu0));
    gsl_vector_set(step.v, 0, 0.05 * p_span);
    gsl_vector_set(step.v, 1, 0.1);
    std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> s(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2), &gsl_multimin_fminimizer_free);
    gsl_multimin_fminimizer_set(s.get(), &f, x.v, step.v);
    int status = GSL_CONTINUE;
    for (int it = 0; it < max_iterations && status == GSL_CONTINUE; it++) {
        if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) {
            break;
        }
        status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), 1e-12);
    }
    return {gsl_vector_get(s->x, 0), std::exp(gsl_vector_get(s->x, 1))};
}

inline Eq2Fit eq2_solve(const std::vector<FitPoint> &data, const Eq2Options &opt, bool grid, double p_c0, double nu0) {
    check_eq2_design(data);
    const auto w = point_weights(data, false);
    double p_lo = data.front().p;
    double p_hi = data.front().p;
    for (const auto &d : data) {
        p_lo = std::min(p_lo, d.p);
        p_hi = std::max(p_hi, d.p);
    }
    const double span = p_hi - p_lo;
    double grid_best = std::numeric_limits<double>::infinity();
    if (grid) {
        for (int i = 0; i < opt.grid_pc; i++) {
            const double pc = p_lo + span * (i + 0.5) / opt.grid_pc;
            for (int j = 0; j < opt.grid_nu; j++) {
                const double nu = opt.nu_min * std::pow(opt.nu_max / opt.nu_min, (j + 0.5) / opt.grid_nu);
                const double o = eq2_inner(data, w, pc, nu).objective;
                if (o < grid_best) {
                    grid_best = o;
                    p_c0 = pc;
                    nu0 = nu;
                }
            }
        }
        if (!std::isfinite(grid_best)) {
            throw std::runtime_error("fit_eq2: objective is not finite anywhere on the seed grid.");
        }
    }
    auto [pc, nu] = eq2_simplex(data, w, p_c0, nu0, span, opt.max_iterations);
    Eq2Inner in = eq2_inner(data, w, pc, nu);
    const double seed_obj = eq2_inner(data, w, p_c0, nu0).objective;
    if (!(in.objective <= seed_obj)) {
        // The simplex never returns worse than its start; guard against NaN drift.
        pc = p_c0;
        nu = nu0;
        in = eq2_inner(data, w, pc, nu);
    }
    if (!std::isfinite(in.objective)) {
        throw std::runtime_error("fit_eq2: simplex search did not converge to a finite objective.");
    }
    Eq2Fit out;
    out.T_c = in.coef[0];
    out.A = in.coef[1];
    out.B = in.coef[2];
    out.p_c = pc;
    out.nu = nu;
    out.objective = in.objective;
    for (const auto &d : data) {
        out.x.push_back((d.p - pc) * std::pow(static_cast<double>(d.L), 1.0 / nu));
    }
    return out;
}

}  // namespace detail

/// Objective of the finite-size-scaling fit at fixed (p_c, nu), with the linear parameters profiled out.
inline double eq2_objective_at(const std::vector<FitPoint> &data, double p_c, double nu) {
    return detail::eq2_inner(data, detail::point_weights(data, false), p_c, nu).objective;
}

inline Eq2Fit fit_eq2(const std::vector<FitPoint> &data, const Eq2Options &opt = {}) {
    Eq2Fit best = detail::eq2_solve(data, opt, true, 0, 1);
    if (opt.bootstrap <= 0) {
        return best;
    }
    TrialRng rng(opt.seed, 0);
    std::array<double, 5> sum{};
    std::array<double, 5> sum2{};
    int used = 0;
    for (int b = 0; b < opt.bootstrap; b++) {
        std::vector<FitPoint> sample;
        sample.reserve(data.size());
        for (std::size_t i = 0; i < data.size(); i++) {
            sample.push_back(data[rng.below(data.size())]);
        }
        Eq2Fit f;
        try {
            f = detail::eq2_solve(sample, opt, false, best.p_c, best.nu);
        } catch (const std::exception &) {
            continue;  // resample lost the L or p spread
        }
        const std::array<double, 5> v{f.T_c, f.p_c, f.nu, f.A, f.B};
        for (int k = 0; k < 5; k++) {
            sum[static_cast<std::size_t>(k)] += v[static_cast<std::size_t>(k)];
            sum2[static_cast<std::size_t>(k)] += v[static_cast<std::size_t>(k)] * v[static_cast<std::size_t>(k)];
        }
        used++;
    }
    if (used > 1) {
        std::array<double, 5> sd{};
        for (int k = 0; k < 5; k++) {
            const double m = sum[static_cast<std::size_t>(k)] / used;
            sd[static_cast<std::size_t>(k)] =
                std::sqrt(std::max(0.0, (sum2[static_cast<std::size_t>(k)] - used * m * m) / (used - 1)));
        }
        best.err_T_c = sd[0];
        best.err_p_c = sd[1];
        best.err_nu = sd[2];
        best.err_A = sd[3];
        best.err_B = sd[4];
    }
    best.bootstrap_used = used;
    return best;
}

}  // namespace toric
