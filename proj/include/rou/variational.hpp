#pragma once

/**
 * @file variational.hpp
 * @brief Small-noise large deviations of OU, reflected OU and doubly reflected OU.
 *
 * For the zeroth-order flow x(t) = alpha/gamma + (x0 - alpha/gamma) e^{-gamma t}
 * and a level b > x(T), all three processes share the decay rate
 *
 *   lim eps log P(X_T >= b) = -(b - x(T))^2 / ((1 - e^{-2 gamma T}) sigma^2 / gamma)
 *
 * and the most likely path f*(t) = x(t) + (b - x(T)) sinh(gamma t) / sinh(gamma T),
 * which never leaves [0, inf) (resp. [0, d] when alpha/gamma < d), so the
 * boundary terms of the reflected rate functionals are never charged.
 */

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "rou/errors.hpp"
#include "rou/model.hpp"
#include "rou/normal.hpp"
#include "rou/simulate.hpp"
#include "rou/stats.hpp"

namespace rou {

enum class Regime { OU, ROU, DROU };

inline std::string to_string(Regime r) {
    switch (r) {
    case Regime::OU: return "ou";
    case Regime::ROU: return "rou";
    case Regime::DROU: return "drou";
    }
    return "?";
}

/// Noiseless flow x(t).
inline double zeroth_order_path(const ModelParams& params, double t) noexcept {
    const double m = params.mean_level();
    return m + (params.x0 - m) * std::exp(-params.gamma * t);
}

/// x(t) sampled on [0, n dt].
inline DiscretePath zeroth_order_path(const ModelParams& params, double dt, std::size_t n_steps) {
    return DiscretePath::sample([&](double t) { return zeroth_order_path(params, t); }, 0.0, dt, n_steps);
}

/// Exact law of the free OU state at time T: Gaussian with these moments.
struct GaussianLaw {
    double mean = 0.0;
    double variance = 0.0;
};

inline GaussianLaw ou_transient_law(const ModelParams& params, double T) noexcept {
    return {zeroth_order_path(params, T),
            params.epsilon * params.sigma * params.sigma / (2.0 * params.gamma) * -std::expm1(-2.0 * params.gamma * T)};
}

/// log P(X_T >= b) for the free OU process.
inline double ou_log_tail(const ModelParams& params, double T, double b) noexcept {
    const GaussianLaw law = ou_transient_law(params, T);
    return normal::log_sf((b - law.mean) / std::sqrt(law.variance));
}

/// Minimiser of the OU rate functional over paths from x0 at 0 to a at T.
struct MostLikelyPath {
    ModelParams params;
    double a = 0.0;
    double T = 1.0;
    double C = 0.0; ///< f*(t) = (C - m) e^{gamma t} + (x0 - C) e^{-gamma t} + m, m = alpha/gamma

    double operator()(double t) const noexcept {
        const double m = params.mean_level();
        return (C - m) * std::exp(params.gamma * t) + (params.x0 - C) * std::exp(-params.gamma * t) + m;
    }

    /// Equivalent form x(t) + (a - x(T)) sinh(gamma t) / sinh(gamma T).
    double bridge_form(double t) const noexcept {
        return zeroth_order_path(params, t) +
               (a - zeroth_order_path(params, T)) * std::sinh(params.gamma * t) / std::sinh(params.gamma * T);
    }

    DiscretePath sample(double dt) const {
        const auto n = static_cast<std::size_t>(std::llround(T / dt));
        if (n < 1) throw ValidationError("dt must not exceed T");
        const double step = T / static_cast<double>(n);
        std::vector<double> v(n + 1);
        for (std::size_t k = 0; k <= n; ++k) v[k] = (*this)(static_cast<double>(k) * step);
        v.front() = params.x0;
        v.back() = a;
        return DiscretePath(0.0, step, std::move(v));
    }
};

inline MostLikelyPath most_likely_path(const ModelParams& params, double T, double a) {
    if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("T must be > 0");
    if (!(params.gamma > 0.0)) throw ValidationError("gamma must be > 0");
    const double m = params.mean_level();
    const double g = params.gamma;
    const double C = (a - m + m * std::exp(g * T) - params.x0 * std::exp(-g * T)) / (2.0 * std::sinh(g * T));
    return {params, a, T, C};
}

struct DecayRateReport {
    double rate = 0.0; ///< <= 0
    MostLikelyPath mlp;
    Regime regime = Regime::OU;
};

/**
 * Closed-form decay rate of P(state_T >= b) under the given regime. The
 * number is identical for every regime whose preconditions hold; only the
 * checks differ.
 */
inline DecayRateReport decay_rate(const ModelParams& params, double T, double b, Regime regime) {
    ModelParams checked = params;
    switch (regime) {
    case Regime::OU: checked.boundary = Boundary::free(); break;
    case Regime::ROU: checked.boundary = Boundary::lower_at_zero(); break;
    case Regime::DROU:
        if (params.boundary.kind != BoundaryKind::Double) throw ValidationError("drou regime requires an upper level d");
        break;
    }
    validate(checked);
    if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("T must be > 0");

    const double xT = zeroth_order_path(params, T);
    if (!(b > xT)) throw ValidationError("not a rare event: b <= x(T)");
    if (regime == Regime::DROU) {
        if (!(params.mean_level() < params.boundary.upper)) throw ValidationError("assumption alpha/gamma < d violated");
        if (b > params.boundary.upper) throw ValidationError("upper boundary below target: b > d");
    }
    const double gap = b - xT;
    const double denom = -std::expm1(-2.0 * params.gamma * T) * params.sigma * params.sigma / params.gamma;
    return {-(gap * gap) / denom, most_likely_path(params, T, b), regime};
}

/// T -> infinity limit of the decay rate: -(b - alpha/gamma)^2 / (sigma^2 / gamma).
inline double stationary_decay_rate(const ModelParams& params, double b) noexcept {
    const double gap = b - params.mean_level();
    return -(gap * gap) * params.gamma / (params.sigma * params.sigma);
}

enum class RateVariant { I, Iplus, Iplusplus };

inline constexpr double kBoundaryTol = 1e-9;

struct RateFunctionalOptions {
    double boundary_tol = kBoundaryTol;
    double upper = std::numeric_limits<double>::infinity(); ///< d for Iplusplus
};

/**
 * Rate functional of a grid path under a general scalar drift:
 *
 *   I   = (2 sigma^2)^{-1} int (f' - b(f))^2
 *   I+  = I - (2 sigma^2)^{-1} (b(0)^-)^2 int 1{f = 0}
 *   I++ = (2 sigma^2)^{-1} int (f' - b(f) - 1{f = 0} b(0)^- + 1{f = d} b(d)^+)^2
 *
 * f' by central differences (second-order one-sided at the ends), integral by
 * the composite trapezoid rule. Returns +inf when the path leaves the domain
 * of the variant by more than boundary_tol.
 */
inline double rate_functional(const DiscretePath& path, const std::function<double(double)>& drift, double sigma,
                              double x0, RateVariant variant, RateFunctionalOptions opts = {}) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (std::fabs(path.front() - x0) > kBoundaryTol * std::max(1.0, std::fabs(x0)))
        throw ValidationError("path does not start at x0");
    if (!(sigma > 0.0)) throw ValidationError("sigma must be > 0");
    const double d = opts.upper;
    if (variant == RateVariant::Iplusplus && !(d > 0.0 && std::isfinite(d)))
        throw ValidationError("Iplusplus needs a finite upper level d");

    const auto& f = path.values();
    const std::size_t n = f.size();
    for (double v : f) {
        if (variant != RateVariant::I && v < -opts.boundary_tol) return inf;
        if (variant == RateVariant::Iplusplus && v > d + opts.boundary_tol) return inf;
    }

    const double dt = path.dt();
    auto derivative = [&](std::size_t k) {
        if (n == 2) return (f[1] - f[0]) / dt;
        if (k == 0) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dt);
        if (k == n - 1) return (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dt);
        return (f[k + 1] - f[k - 1]) / (2.0 * dt);
    };
    const double b0_minus = std::max(0.0, -drift(0.0));
    const double bd_plus = variant == RateVariant::Iplusplus ? std::max(0.0, drift(d)) : 0.0;

    std::vector<double> integrand(n);
    std::vector<double> at_zero(n);
    for (std::size_t k = 0; k < n; ++k) {
        const bool on_zero = std::fabs(f[k]) <= opts.boundary_tol;
        double r = derivative(k) - drift(f[k]);
        if (variant == RateVariant::Iplusplus) {
            if (on_zero) r -= b0_minus;
            if (std::fabs(f[k] - d) <= opts.boundary_tol) r += bd_plus;
        }
        integrand[k] = r * r;
        at_zero[k] = on_zero ? 1.0 : 0.0;
    }
    auto trapezoid = [&](std::vector<double>& v) {
        v.front() *= 0.5;
        v.back() *= 0.5;
        return stats::pairwise_sum(v) * dt;
    };
    double value = trapezoid(integrand) / (2.0 * sigma * sigma);
    if (variant == RateVariant::Iplus) value -= b0_minus * b0_minus * trapezoid(at_zero) / (2.0 * sigma * sigma);
    return value;
}

/// OU drift alpha - gamma x; d taken from the params boundary for Iplusplus.
inline double rate_functional(const DiscretePath& path, const ModelParams& params, RateVariant variant,
                              double boundary_tol = kBoundaryTol) {
    RateFunctionalOptions opts{boundary_tol, params.boundary.upper};
    if (variant == RateVariant::Iplusplus && params.boundary.kind != BoundaryKind::Double)
        throw ValidationError("Iplusplus requires a Double boundary");
    return rate_functional(
        path, [&](double x) { return params.drift(x); }, params.sigma, params.x0, variant, opts);
}

struct EmpiricalDecayPoint {
    double epsilon = 0.0;
    std::size_t hits = 0;
    std::size_t reps = 0;
    double p_hat = 0.0;
    double value = std::numeric_limits<double>::quiet_NaN(); ///< eps log p_hat; NaN when p_hat = 0
    double std_error = std::numeric_limits<double>::quiet_NaN(); ///< delta-method SE of `value`
    bool below_resolution = false; ///< p_hat = 0: see `bound`
    double bound = 0.0; ///< eps log of the one-sided 95% Clopper–Pearson upper bound on p
};

/**
 * Monte Carlo counterpart of eps log P(state_T >= b) for each eps. The regime
 * is the params boundary; every eps uses the same replication seeds, so runs
 * with different boundaries but one cfg.seed are coupled.
 */
inline std::vector<EmpiricalDecayPoint> empirical_decay_rate(const ModelParams& params, double T, double b,
                                                             const std::vector<double>& eps_grid, std::size_t reps,
                                                             SimConfig cfg) {
    validate(params);
    if (!(b > zeroth_order_path(params, T))) throw ValidationError("not a rare event: b <= x(T)");
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] > 0.0)) throw ValidationError("epsilon values must be > 0");
        if (i > 0 && !(eps_grid[i] < eps_grid[i - 1])) throw ValidationError("epsilon grid must be decreasing");
    }
    cfg.horizon_T = T;

    std::vector<EmpiricalDecayPoint> out;
    for (double eps : eps_grid) {
        ModelParams p = params;
        p.epsilon = eps;
        const auto counter = simulate_batch(p, cfg, reps, ExceedanceCounter{b});
        EmpiricalDecayPoint pt;
        pt.epsilon = eps;
        pt.hits = counter.hits;
        pt.reps = counter.total;
        pt.p_hat = counter.fraction();
        pt.bound = eps * std::log(stats::clopper_pearson_upper(pt.hits, pt.reps));
        if (pt.hits == 0) {
            pt.below_resolution = true;
        } else {
            pt.value = eps * std::log(pt.p_hat);
            pt.std_error = eps * std::sqrt((1.0 - pt.p_hat) / (static_cast<double>(pt.reps) * pt.p_hat));
        }
        out.push_back(pt);
    }
    return out;
}

/// eps log P(X_T >= b) from the exact Gaussian law of the free OU process.
inline std::vector<double> gaussian_decay_sequence(const ModelParams& params, double T, double b,
                                                   const std::vector<double>& eps_grid) {
    std::vector<double> out;
    out.reserve(eps_grid.size());
    for (double eps : eps_grid) {
        ModelParams p = params;
        p.epsilon = eps;
        out.push_back(eps * ou_log_tail(p, T, b));
    }
    return out;
}

} // namespace rou
