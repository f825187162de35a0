#pragma once

/**
 * @file ode.hpp
 * @brief Adaptive Dormand–Prince 5(4) integrator for small fixed-size systems.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>

#include "rou/errors.hpp"

namespace rou::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Tolerances {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    std::size_t max_steps = 200000;
};

template <std::size_t N>
struct Solution {
    State<N> y{};
    std::size_t steps = 0;
    bool stopped = false; ///< the stop predicate fired before reaching the end point
    double x_stop = 0.0;  ///< abscissa of the last accepted point
};

/**
 * Integrates y' = f(x, y) from x0 to x1. After every accepted step `stop(x, y)`
 * is consulted; returning true ends the integration early with `stopped` set.
 */
template <std::size_t N, class Rhs, class Stop>
Solution<N> integrate(Rhs&& f, double x0, double x1, State<N> y, Tolerances tol, Stop&& stop) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // fifth minus embedded fourth order weights
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    Solution<N> out;
    out.y = y;
    out.x_stop = x0;
    if (x1 == x0) return out;
    const double span = x1 - x0;
    const double dir = span > 0 ? 1.0 : -1.0;
    double h = dir * std::min(std::fabs(span), 1e-3 * std::fabs(span) + 1e-6);
    double x = x0;

    auto axpy = [](const State<N>& base, std::initializer_list<std::pair<double, const State<N>*>> terms, double hh) {
        State<N> r = base;
        for (const auto& [w, k] : terms)
            for (std::size_t i = 0; i < N; ++i) r[i] += hh * w * (*k)[i];
        return r;
    };

    State<N> k1 = f(x, y);
    while (dir * (x1 - x) > 0.0) {
        if (out.steps >= tol.max_steps) throw NumericalError("ODE integration exceeded the step budget");
        const bool last = dir * (x + h - x1) >= 0.0;
        if (last) h = x1 - x;

        const State<N> k2 = f(x + c2 * h, axpy(y, {{a21, &k1}}, h));
        const State<N> k3 = f(x + c3 * h, axpy(y, {{a31, &k1}, {a32, &k2}}, h));
        const State<N> k4 = f(x + c4 * h, axpy(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, h));
        const State<N> k5 = f(x + c5 * h, axpy(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, h));
        const State<N> k6 = f(x + h, axpy(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, h));
        const State<N> y_new = axpy(y, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, h);
        const State<N> k7 = f(x + h, y_new);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double scale = tol.abs_tol + tol.rel_tol * std::max(std::fabs(y[i]), std::fabs(y_new[i]));
            err = std::max(err, std::fabs(e) / scale);
        }
        if (!std::isfinite(err)) throw NumericalError("ODE right-hand side produced a non-finite value");

        if (err <= 1.0) {
            x = last ? x1 : x + h;
            y = y_new;
            k1 = k7;
            ++out.steps;
            out.y = y;
            out.x_stop = x;
            if (stop(x, y)) {
                out.stopped = true;
                return out;
            }
        }
        const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h *= factor;
        if (std::fabs(h) < 1e-14 * std::max(1.0, std::fabs(x)))
            throw NumericalError("ODE step size underflow at x = " + std::to_string(x));
    }
    return out;
}

template <std::size_t N, class Rhs>
Solution<N> integrate(Rhs&& f, double x0, double x1, State<N> y, Tolerances tol = {}) {
    return integrate<N>(std::forward<Rhs>(f), x0, x1, y, tol, [](double, const State<N>&) { return false; });
}

} // namespace rou::ode
