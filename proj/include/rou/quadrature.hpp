#pragma once

/**
 * @file quadrature.hpp
 * @brief Adaptive composite Gauss–Legendre quadrature with recursive bisection.
 *
 * A panel is accepted when the 10-point rule on the whole panel and the sum
 * of the rules on its two halves agree to within the panel's share of the
 * absolute tolerance; otherwise both halves are refined independently.
 */

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "rou/errors.hpp"

namespace rou::quad {

template <std::size_t N>
struct GaussLegendreRule {
    std::array<double, N> nodes{};   ///< on [-1, 1]
    std::array<double, N> weights{};
};

/// Nodes and weights by Newton iteration on P_N; accurate to machine precision.
template <std::size_t N>
const GaussLegendreRule<N>& gauss_legendre() {
    static const GaussLegendreRule<N> rule = [] {
        GaussLegendreRule<N> r;
        for (std::size_t i = 0; i < N; ++i) {
            double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(N) + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0;
                double p1 = x;
                for (std::size_t k = 2; k <= N; ++k) {
                    const double pk = ((2.0 * static_cast<double>(k) - 1.0) * x * p1 - (static_cast<double>(k) - 1.0) * p0) /
                                      static_cast<double>(k);
                    p0 = p1;
                    p1 = pk;
                }
                dp = static_cast<double>(N) * (x * p1 - p0) / (x * x - 1.0);
                const double step = p1 / dp;
                x -= step;
                if (std::fabs(step) < 1e-16) break;
            }
            r.nodes[i] = x;
            r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

/// Fixed N-point Gauss–Legendre on [a, b].
template <std::size_t N = 10, class F>
double fixed(F&& f, double a, double b) {
    const auto& rule = gauss_legendre<N>();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

struct Options {
    double abs_tol = 1e-10;
    std::size_t max_panels = 20000;
    int max_depth = 60;
};

struct Result {
    double value = 0.0;
    double error = 0.0; ///< sum of accepted panel discrepancies
    std::size_t panels = 0;
};

template <class F>
Result integrate(F&& f, double a, double b, Options opts = {}) {
    if (a == b) return {};
    if (!(std::isfinite(a) && std::isfinite(b))) throw NumericalError("quadrature bounds must be finite");
    const double sign = b < a ? -1.0 : 1.0;
    if (b < a) std::swap(a, b);
    const double total_len = b - a;

    struct Panel {
        double lo, hi, whole;
        int depth;
    };
    std::vector<Panel> stack;
    stack.push_back({a, b, fixed(f, a, b), 0});

    Result res;
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (p.lo + p.hi);
        const double left = fixed(f, p.lo, mid);
        const double right = fixed(f, mid, p.hi);
        const double refined = left + right;
        const double diff = std::fabs(refined - p.whole);
        const double budget = opts.abs_tol * (p.hi - p.lo) / total_len;
        if (!std::isfinite(refined)) throw NumericalError("quadrature integrand is not finite");
        if (diff <= budget || p.hi - p.lo <= 1e-15 * total_len) {
            res.value += refined;
            res.error += diff;
            ++res.panels;
            continue;
        }
        if (p.depth >= opts.max_depth || stack.size() + res.panels >= opts.max_panels)
            throw NumericalError("adaptive quadrature did not reach tolerance " + std::to_string(opts.abs_tol));
        stack.push_back({mid, p.hi, right, p.depth + 1});
        stack.push_back({p.lo, mid, left, p.depth + 1});
    }
    res.value *= sign;
    return res;
}

} // namespace rou::quad
