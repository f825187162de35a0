#pragma once

// Property checks for Skorokhod map outputs, shared by the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "rou/reflection.hpp"

namespace rou::testing {

struct SkorokhodCheck {
    double decomposition = 0.0; ///< max |h - (x + L - U)|
    double containment = 0.0;   ///< max distance of h outside the domain
    double monotonicity = 0.0;  ///< max decrease of either regulator, plus |L0| + |U0|
    double complementarity = 0.0; ///< max distance from the boundary at steps where a regulator grows
    bool ok(double tol) const noexcept {
        return decomposition <= tol && containment <= tol && monotonicity <= tol && complementarity <= tol;
    }
};

inline SkorokhodCheck check_solution(const DiscretePath& input, const SkorokhodSolution& s,
                                     double d = std::numeric_limits<double>::infinity()) {
    SkorokhodCheck c;
    const auto& x = input.values();
    const auto& h = s.constrained.values();
    const auto& l = s.regulator_lower.values();
    const auto& u = s.regulator_upper.values();
    c.monotonicity = std::fabs(l[0]) + std::fabs(u[0]);
    for (std::size_t k = 0; k < x.size(); ++k) {
        c.decomposition = std::max(c.decomposition, std::fabs(h[k] - (x[k] + l[k] - u[k])));
        c.containment = std::max({c.containment, -h[k], std::isfinite(d) ? h[k] - d : 0.0});
        if (k == 0) continue;
        c.monotonicity = std::max({c.monotonicity, l[k - 1] - l[k], u[k - 1] - u[k]});
        if (l[k] > l[k - 1]) c.complementarity = std::max(c.complementarity, std::fabs(h[k]));
        if (u[k] > u[k - 1]) c.complementarity = std::max(c.complementarity, std::fabs(h[k] - d));
    }
    return c;
}

/// Random piecewise-linear path on a uniform grid, starting inside [0, d].
inline DiscretePath random_piecewise_linear(std::mt19937_64& rng, double d, std::size_t n_steps = 400) {
    std::uniform_int_distribution<int> knots_dist(2, 25);
    const int knots = knots_dist(rng);
    const double span = std::isfinite(d) ? 3.0 * d : 4.0;
    std::uniform_real_distribution<double> value(-span, span);
    std::uniform_real_distribution<double> start(0.0, std::isfinite(d) ? d : 2.0);
    std::vector<double> kv(static_cast<std::size_t>(knots) + 1);
    kv[0] = start(rng);
    for (std::size_t i = 1; i < kv.size(); ++i) kv[i] = value(rng);
    const double dt = 1.0 / static_cast<double>(n_steps);
    std::vector<double> v(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double s = static_cast<double>(k) / static_cast<double>(n_steps) * knots;
        const auto i = std::min(static_cast<std::size_t>(s), kv.size() - 2);
        const double w = s - static_cast<double>(i);
        v[k] = (1.0 - w) * kv[i] + w * kv[i + 1];
    }
    return DiscretePath(0.0, dt, std::move(v));
}

inline double sup_distance(const DiscretePath& a, const DiscretePath& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::fabs(a[k] - b[k]));
    return m;
}

} // namespace rou::testing
