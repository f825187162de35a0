#pragma once

/**
 * @file reflection.hpp
 * @brief Deterministic Skorokhod maps on [0, inf) and [0, d] for grid paths.
 *
 * Given an input path x with x(0) in the domain, the map returns the unique
 * constrained path h = x + lower - upper where `lower` and `upper` are
 * nondecreasing from zero, `lower` grows only while h = 0 and `upper` only
 * while h = d. Inputs are treated as piecewise linear between grid points,
 * for which the discrete maps below are exact: on a linear segment the
 * running extremum of the input is attained at an endpoint.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rou/errors.hpp"
#include "rou/model.hpp"

namespace rou {

struct SkorokhodSolution {
    DiscretePath constrained;
    DiscretePath regulator_lower;
    DiscretePath regulator_upper;
};

namespace detail {

// lower_k = max(0, max_{j<=k} -(y_j)), the minimal push keeping y + lower >= 0.
inline std::vector<double> lower_regulator(const std::vector<double>& y) {
    std::vector<double> reg(y.size());
    double running = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) {
        running = std::max(running, -y[k]);
        reg[k] = running;
    }
    return reg;
}

// upper_k = max(0, max_{j<=k} (y_j - d)), the minimal push keeping y - upper <= d.
inline std::vector<double> upper_regulator(const std::vector<double>& y, double d) {
    std::vector<double> reg(y.size());
    double running = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) {
        running = std::max(running, y[k] - d);
        reg[k] = running;
    }
    return reg;
}

} // namespace detail

/// One-sided map at 0. Throws ValidationError on a negative initial value.
inline SkorokhodSolution reflect_one_sided(const DiscretePath& input) {
    if (!(input.front() >= 0.0)) throw ValidationError("reflection input must start at a value >= 0");
    const auto& x = input.values();
    std::vector<double> lower = detail::lower_regulator(x);
    std::vector<double> h(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) h[k] = std::max(0.0, x[k] + lower[k]);
    return {input.with_values(std::move(h)), input.with_values(std::move(lower)),
            input.with_values(std::vector<double>(x.size(), 0.0))};
}

struct TwoSidedOptions {
    std::size_t max_sweeps = 1000;
    double tolerance = 1e-12;
};

/**
 * Two-sided map on [0, d] by alternating one-sided projections.
 *
 * Starting from upper = 0, each sweep recomputes lower as the one-sided lower
 * regulator of x - upper and then upper as the one-sided upper regulator of
 * x + lower. Both sequences increase monotonically to the minimal pair; each
 * sweep resolves at least one more alternation between the two boundaries,
 * so the number of sweeps is bounded by the number of boundary switches.
 */
inline SkorokhodSolution reflect_two_sided(const DiscretePath& input, double d, TwoSidedOptions opts = {}) {
    if (!(d > 0.0) || !std::isfinite(d)) throw ValidationError("d must be > 0");
    if (!(input.front() >= 0.0 && input.front() <= d))
        throw ValidationError("reflection input must start inside [0, d]");

    const auto& x = input.values();
    const std::size_t n = x.size();
    std::vector<double> upper(n, 0.0);
    std::vector<double> lower(n, 0.0);
    std::vector<double> h(x);
    std::vector<double> shifted(n);

    for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        for (std::size_t k = 0; k < n; ++k) shifted[k] = x[k] - upper[k];
        lower = detail::lower_regulator(shifted);
        for (std::size_t k = 0; k < n; ++k) shifted[k] = x[k] + lower[k];
        upper = detail::upper_regulator(shifted, d);

        double change = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double next = x[k] + lower[k] - upper[k];
            change = std::max(change, std::fabs(next - h[k]));
            h[k] = next;
        }
        if (change < opts.tolerance) {
            for (double& v : h) v = std::clamp(v, 0.0, d);
            return {input.with_values(std::move(h)), input.with_values(std::move(lower)),
                    input.with_values(std::move(upper))};
        }
    }
    throw NumericalError("two-sided reflection did not converge after " + std::to_string(opts.max_sweeps) +
                         " sweeps");
}

/// Dispatches on the boundary: identity for Free, one- or two-sided otherwise.
inline SkorokhodSolution reflect(const DiscretePath& input, const Boundary& boundary) {
    switch (boundary.kind) {
    case BoundaryKind::Free: {
        const std::vector<double> zeros(input.size(), 0.0);
        return {input, input.with_values(zeros), input.with_values(zeros)};
    }
    case BoundaryKind::LowerAtZero: return reflect_one_sided(input);
    case BoundaryKind::Double: return reflect_two_sided(input, boundary.upper);
    }
    throw ValidationError("unknown boundary kind");
}

/**
 * Zero-noise reflected flow h' = drift(h) + regulator push, by explicit Euler
 * on the grid followed by the per-step Skorokhod projection.
 */
template <class Drift>
DiscretePath reflected_flow(Drift&& drift, double x0, double dt, std::size_t n_steps, const Boundary& boundary) {
    std::vector<double> h(n_steps + 1);
    h[0] = x0;
    for (std::size_t k = 0; k < n_steps; ++k) {
        double next = h[k] + drift(h[k]) * dt;
        if (boundary.has_lower()) next = std::max(next, 0.0);
        if (boundary.has_upper()) next = std::min(next, boundary.upper);
        h[k + 1] = next;
    }
    return DiscretePath(0.0, dt, std::move(h));
}

} // namespace rou
