#pragma once

/**
 * @file stationary.hpp
 * @brief Long-run quantities of the doubly reflected OU process on [0, d].
 *
 * With generator (L h)(x) = (alpha - gamma x) h'(x) + (s^2/2) h''(x), where
 * s = sqrt(epsilon) sigma is the effective diffusion coefficient, and weight
 *
 *   W(v) = exp(2 alpha v / s^2 - gamma v^2 / s^2),
 *
 * the loss process U and idleness process L grow at rates
 *
 *   q_U = (s^2/2) W(d) / int_0^d W,    q_L = (s^2/2) / int_0^d W,
 *
 * and satisfy central limit theorems with variances
 *
 *   eta_U^2 = s^2 int_0^d h_U'(x)^2 pi(dx),   h_U'(x) = (2 q_U / s^2) G(x),
 *   eta_L^2 = s^2 int_0^d h_L'(x)^2 pi(dx),   h_L'(x) = -1/W(x) + (2 q_L / s^2) G(x),
 *
 * where G(x) = int_0^x W(v)/W(x) dv and pi is the stationary law, a normal
 * N(alpha/gamma, s^2/(2 gamma)) truncated to [0, d].
 *
 * Ratios W(v)/W(u) are always formed as exp(E(v) - E(u)) of the exponent E so
 * that large d or small s cannot overflow.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "rou/errors.hpp"
#include "rou/model.hpp"
#include "rou/normal.hpp"
#include "rou/quadrature.hpp"

namespace rou {

inline constexpr double kDefaultQuadTol = 1e-10;

namespace detail {

inline void require_double(const ModelParams& params) {
    validate(params);
    if (params.boundary.kind != BoundaryKind::Double) throw ValidationError("requires a Double boundary");
}

inline void require_in_domain(const ModelParams& params, double x) {
    if (!(x >= 0.0 && x <= params.boundary.upper)) throw ValidationError("x must lie in [0, d]");
}

} // namespace detail

/// Exponent E(v) of the weight, W = exp(E).
inline double weight_exponent(const ModelParams& params, double v) noexcept {
    const double s2 = params.epsilon * params.sigma * params.sigma;
    return (2.0 * params.alpha * v - params.gamma * v * v) / s2;
}

inline double weight_W(const ModelParams& params, double v) noexcept { return std::exp(weight_exponent(params, v)); }

/// Truncated-normal stationary density of the doubly reflected process.
inline double stationary_density(const ModelParams& params, double x) {
    detail::require_double(params);
    detail::require_in_domain(params, x);
    const double scale = std::sqrt(2.0 * params.gamma) / params.noise_scale();
    const double m = params.mean_level();
    const double lo = -m * scale;
    const double hi = (params.boundary.upper - m) * scale;
    // Difference of upper tails when both arguments sit in the right tail, avoiding cancellation.
    const double mass = lo > 0.0 ? normal::sf(lo) - normal::sf(hi) : normal::cdf(hi) - normal::cdf(lo);
    return scale * normal::pdf((x - m) * scale) / mass;
}

/// G(x) = int_0^x W(v)/W(x) dv.
inline double weight_ratio_integral(const ModelParams& params, double x, double tol = kDefaultQuadTol) {
    if (x == 0.0) return 0.0;
    const double ex = weight_exponent(params, x);
    return quad::integrate([&](double v) { return std::exp(weight_exponent(params, v) - ex); }, 0.0, x, {tol}).value;
}

struct LossStatistics {
    double q_upper = 0.0;
    double q_lower = 0.0;
    double eta2_upper = 0.0;
    double eta2_lower = 0.0;
    double quad_tol = 0.0; ///< accumulated quadrature error estimate
};

/// Mean loss rate q_U alone (single quadrature).
inline double loss_rate_upper(const ModelParams& params, double tol = kDefaultQuadTol) {
    detail::require_double(params);
    const double s2 = params.epsilon * params.sigma * params.sigma;
    return 0.5 * s2 / weight_ratio_integral(params, params.boundary.upper, tol);
}

struct Lemma7Value {
    double h = 0.0;
    double h_prime = 0.0;
};

/**
 * Solution of (L h) = q_U on [0, d] with h(0) = 0, h'(0) = 0, h'(d) = 1:
 *
 *   h(x) = (2 q_U / s^2) int_0^x int_0^u W(v)/W(u) dv du.
 *
 * The outer integral nests the inner adaptive quadrature at every outer node.
 */
inline Lemma7Value lemma7_h(const ModelParams& params, double x, double tol = kDefaultQuadTol) {
    detail::require_double(params);
    detail::require_in_domain(params, x);
    const double s2 = params.epsilon * params.sigma * params.sigma;
    const double q = loss_rate_upper(params, tol);
    const double c = 2.0 * q / s2;
    const double inner_tol = 0.1 * tol / std::max(1.0, params.boundary.upper);
    const double outer =
        quad::integrate([&](double u) { return weight_ratio_integral(params, u, inner_tol); }, 0.0, x, {tol}).value;
    return {c * outer, c * weight_ratio_integral(params, x, tol)};
}

/// All four long-run loss/idleness statistics by adaptive quadrature.
inline LossStatistics loss_statistics(const ModelParams& params, double tol = kDefaultQuadTol) {
    detail::require_double(params);
    const double d = params.boundary.upper;
    const double s2 = params.epsilon * params.sigma * params.sigma;

    // int_0^d W = exp(E*) int_0^d exp(E - E*), E* the exponent maximum over [0, d].
    const double peak = std::clamp(params.mean_level(), 0.0, d);
    const double e_star = weight_exponent(params, peak);
    const auto scaled = quad::integrate([&](double v) { return std::exp(weight_exponent(params, v) - e_star); }, 0.0,
                                        d, {tol});
    LossStatistics out;
    out.q_lower = 0.5 * s2 * std::exp(-e_star) / scaled.value;
    out.q_upper = 0.5 * s2 * std::exp(weight_exponent(params, d) - e_star) / scaled.value;
    out.quad_tol = scaled.error;

    const double cu = 2.0 * out.q_upper / s2;
    const double cl = 2.0 * out.q_lower / s2;
    const double inner_tol = 0.1 * tol / std::max(1.0, d);
    auto density = [&](double x) { return stationary_density(params, x); };

    const auto eta_u = quad::integrate(
        [&](double x) {
            const double hp = cu * weight_ratio_integral(params, x, inner_tol);
            return hp * hp * density(x);
        },
        0.0, d, {tol});
    const auto eta_l = quad::integrate(
        [&](double x) {
            const double hp = -std::exp(-weight_exponent(params, x)) + cl * weight_ratio_integral(params, x, inner_tol);
            return hp * hp * density(x);
        },
        0.0, d, {tol});
    out.eta2_upper = s2 * eta_u.value;
    out.eta2_lower = s2 * eta_l.value;
    out.quad_tol += s2 * (eta_u.error + eta_l.error);
    return out;
}

/**
 * Tabulated derivative f = h' of a solution of (L h) = q, i.e. of
 *
 *   f'(x) = 2q/s^2 - (2 alpha - 2 gamma x)/s^2 f(x),
 *
 * with piecewise cubic Hermite interpolation on a uniform grid over [0, d].
 * Used for fast evaluation along long simulated paths.
 */
class HPrimeTable {
public:
    enum class Kind { Upper, Lower };

    HPrimeTable(const ModelParams& params, Kind kind, std::size_t intervals = 4096, double tol = kDefaultQuadTol)
        : d_(params.boundary.upper), step_(0.0) {
        detail::require_double(params);
        if (intervals < 2) throw ValidationError("table needs at least two intervals");
        const LossStatistics stats = loss_statistics(params, tol);
        s2_ = params.epsilon * params.sigma * params.sigma;
        alpha_ = params.alpha;
        gamma_ = params.gamma;
        q_ = kind == Kind::Upper ? stats.q_upper : stats.q_lower;
        step_ = d_ / static_cast<double>(intervals);
        values_.resize(intervals + 1);
        slopes_.resize(intervals + 1);

        // Accumulate G(x) panel by panel: G(x + dx) W(x + dx) = G(x) W(x) + int_x^{x+dx} W.
        const double c = 2.0 * q_ / s2_;
        double g = 0.0;
        for (std::size_t i = 0; i <= intervals; ++i) {
            const double x = static_cast<double>(i) * step_;
            if (i > 0) {
                const double xp = x - step_;
                const double ex = weight_exponent(params, x);
                const double carried = g * std::exp(weight_exponent(params, xp) - ex);
                g = carried +
                    quad::integrate([&](double v) { return std::exp(weight_exponent(params, v) - ex); }, xp, x,
                                    {1e-14})
                        .value;
            }
            double f = c * g;
            if (kind == Kind::Lower) f -= std::exp(-weight_exponent(params, x));
            values_[i] = f;
            slopes_[i] = slope(x, f);
        }
    }

    double operator()(double x) const noexcept {
        double s = x / step_;
        const auto last = static_cast<double>(values_.size() - 1);
        if (s <= 0.0) s = 0.0;
        if (s >= last) s = last - 1e-12;
        const auto i = static_cast<std::size_t>(s);
        const double t = s - static_cast<double>(i);
        const double t2 = t * t;
        const double t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1;
        const double h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2;
        const double h11 = t3 - t2;
        return h00 * values_[i] + h10 * step_ * slopes_[i] + h01 * values_[i + 1] + h11 * step_ * slopes_[i + 1];
    }

    double rate() const noexcept { return q_; }

private:
    double slope(double x, double f) const noexcept {
        return 2.0 * q_ / s2_ - (2.0 * alpha_ - 2.0 * gamma_ * x) / s2_ * f;
    }

    double d_;
    double step_;
    double s2_ = 1.0;
    double alpha_ = 0.0;
    double gamma_ = 1.0;
    double q_ = 0.0;
    std::vector<double> values_;
    std::vector<double> slopes_;
};

} // namespace rou
