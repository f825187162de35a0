#pragma once

/**
 * @file cumulant.hpp
 * @brief Limiting cumulant psi(theta) = lim t^{-1} log E exp(theta U_t) of the
 *        loss process and the resulting long-time decay rate of P(U_t > c t).
 *
 * psi(theta) is the value of psi for which the solution of
 *
 *   s^2 y'' + (2 alpha - 2 gamma x) y' - 2 psi y = 0,  y(0) = 1, y'(0) = 0,
 *
 * (y = exp(h) linearises (L h) + (s^2/2) h'^2 = psi) satisfies
 * h'(d) = y'(d)/y(d) = theta. The map psi -> h'(d, psi) is found by shooting
 * and inverted by a bracketing root search. psi values for which y vanishes
 * somewhere on [0, d] are outside the admissible window and are reported,
 * never clamped.
 */

#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rou/errors.hpp"
#include "rou/model.hpp"
#include "rou/ode.hpp"
#include "rou/parallel.hpp"
#include "rou/stationary.hpp"

namespace rou {

struct ShootOptions {
    double ode_tol = 1e-10;
};

struct RootOptions {
    double residual_tol = 1e-12;
    std::size_t max_expansions = 60;
    std::size_t max_iterations = 400;
    ShootOptions shoot{};
};

namespace detail {

struct ShootResult {
    bool admissible = false;
    double h_prime = 0.0;
    double x_fail = 0.0; ///< first abscissa where y <= 0, when inadmissible
};

inline ShootResult shoot(const ModelParams& params, double psi, const ShootOptions& opts) {
    const double s2 = params.epsilon * params.sigma * params.sigma;
    const double d = params.boundary.upper;
    auto rhs = [&](double x, const ode::State<2>& y) -> ode::State<2> {
        return {y[1], (2.0 * psi * y[0] - (2.0 * params.alpha - 2.0 * params.gamma * x) * y[1]) / s2};
    };
    // The equation is linear and only y'/y is needed: rescale whenever y grows large.
    constexpr double kRescale = 1e100;
    double x = 0.0;
    ode::State<2> y{1.0, 0.0};
    std::size_t budget = ode::Tolerances{}.max_steps;
    for (;;) {
        const auto sol = ode::integrate<2>(rhs, x, d, y, {opts.ode_tol, opts.ode_tol, budget},
                                           [](double, const ode::State<2>& s) { return !(s[0] > 0.0) || s[0] > kRescale; });
        if (!sol.stopped) return {true, sol.y[1] / sol.y[0], d};
        if (!(sol.y[0] > 0.0)) return {false, -std::numeric_limits<double>::infinity(), sol.x_stop};
        if (sol.steps >= budget) throw NumericalError("ODE integration exceeded the step budget");
        budget -= sol.steps;
        x = sol.x_stop;
        y = {1.0, sol.y[1] / sol.y[0]};
    }
}

} // namespace detail

/// h'(d, psi) = y'(d)/y(d). Throws NumericalError if y reaches zero on [0, d].
inline double shoot_h_prime_at_d(const ModelParams& params, double psi, ShootOptions opts = {}) {
    detail::require_double(params);
    const auto r = detail::shoot(params, psi, opts);
    if (!r.admissible) {
        std::ostringstream msg;
        msg << "psi = " << psi << " is outside the admissible window: y(x) <= 0 at x = " << r.x_fail;
        throw NumericalError(msg.str());
    }
    return r.h_prime;
}

/// Root psi of h'(d, psi) = theta; psi(0) = 0 exactly.
inline double psi_of_theta(const ModelParams& params, double theta, RootOptions opts = {}) {
    detail::require_double(params);
    if (!std::isfinite(theta)) throw ValidationError("theta must be finite");
    if (theta == 0.0) return 0.0;

    // g < 0 below the root; inadmissible psi (y hits zero) counts as h' = -inf.
    auto g = [&](double psi) { return detail::shoot(params, psi, opts.shoot).h_prime - theta; };
    const double s2 = params.epsilon * params.sigma * params.sigma;

    double lo = -0.5 * s2;
    double hi = 0.5 * s2;
    double g_lo = g(lo);
    double g_hi = g(hi);
    double lowest_admissible = std::isfinite(g_lo) ? lo : std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < opts.max_expansions && g_hi < 0.0; ++i) {
        lo = hi;
        g_lo = g_hi;
        hi *= 2.0;
        g_hi = g(hi);
    }
    for (std::size_t i = 0; i < opts.max_expansions && g_lo > 0.0; ++i) {
        hi = lo;
        g_hi = g_lo;
        lo *= 2.0;
        g_lo = g(lo);
        if (std::isfinite(g_lo)) lowest_admissible = lo;
    }
    if (!(g_lo <= 0.0 && g_hi >= 0.0)) {
        std::ostringstream msg;
        msg << "could not bracket psi(theta) for theta = " << theta << "; explored psi in [" << lo << ", " << hi
            << "], lowest admissible psi found " << lowest_admissible;
        throw NumericalError(msg.str());
    }
    if (g_lo == 0.0) return lo;
    if (g_hi == 0.0) return hi;

    // Bisection until both ends are admissible and the bracket is narrow, then Illinois false position.
    std::size_t it = 0;
    while (it++ < opts.max_iterations && (!std::isfinite(g_lo) || hi - lo > 1e-3 * std::max(1.0, std::fabs(hi)))) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        (gm < 0.0 ? lo : hi) = mid;
        (gm < 0.0 ? g_lo : g_hi) = gm;
    }
    int side = 0;
    while (it++ < opts.max_iterations) {
        double x = (lo * g_hi - hi * g_lo) / (g_hi - g_lo);
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        const double gx = g(x);
        if (std::fabs(gx) < opts.residual_tol || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(x))
            return x;
        if (gx < 0.0) {
            lo = x;
            g_lo = gx;
            if (side == -1) g_hi *= 0.5;
            side = -1;
        } else {
            hi = x;
            g_hi = gx;
            if (side == 1) g_lo *= 0.5;
            side = 1;
        }
    }
    throw NumericalError("psi(theta) root search did not converge");
}

struct CumulantCurve {
    std::vector<double> theta_grid;
    std::vector<double> psi_values;
    double shoot_tol = 0.0;
};

/// psi on a grid of theta values; evaluations run in parallel.
inline CumulantCurve cumulant_curve(const ModelParams& params, std::vector<double> thetas, RootOptions opts = {}) {
    detail::require_double(params);
    CumulantCurve curve;
    curve.psi_values = parallel_map(thetas.size(), [&](std::size_t i) { return psi_of_theta(params, thetas[i], opts); });
    curve.theta_grid = std::move(thetas);
    curve.shoot_tol = opts.residual_tol;
    return curve;
}

struct LossLdResult {
    double c = 0.0;
    double rate = 0.0;         ///< lim t^{-1} log P(U_t > c t) = -sup_{theta >= 0} (theta c - psi(theta))
    double argmax_theta = 0.0;
};

/**
 * Gärtner–Ellis rate: -sup_{theta >= 0} (theta c - psi(theta)) by golden-section
 * search over an interval doubled until the concave objective turns down.
 */
inline LossLdResult loss_ld_rate(const ModelParams& params, double c, RootOptions opts = {}) {
    detail::require_double(params);
    if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("c must be > 0");
    auto objective = [&](double theta) { return theta * c - psi_of_theta(params, theta, opts); };

    double hi = 1.0;
    double f_hi = objective(hi);
    double f_half = objective(0.5 * hi);
    for (int i = 0; i < 60 && f_hi > f_half; ++i) {
        hi *= 2.0;
        f_half = f_hi;
        f_hi = objective(hi);
    }

    constexpr double inv_phi = 0.6180339887498949;
    double a = 0.0;
    double b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = objective(x1);
    double f2 = objective(x2);
    while (b - a > 1e-9 * std::max(1.0, hi)) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = objective(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = objective(x1);
        }
    }
    const double theta_star = f1 > f2 ? x1 : x2;
    const double best = std::max(f1, f2);
    // theta = 0 gives objective 0 exactly; the supremum is never below it.
    if (!(best > 0.0)) return {c, 0.0, 0.0};
    return {c, -best, theta_star};
}

} // namespace rou
