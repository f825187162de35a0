#pragma once

/**
 * @file model.hpp
 * @brief Parameter and path types shared by the whole library.
 *
 * The process family is
 *
 *   dX = (alpha - gamma X) dt + sqrt(epsilon) sigma dB            (free OU)
 *   dY = (alpha - gamma Y) dt + sqrt(epsilon) sigma dB + dL       (reflected at 0)
 *   dZ = (alpha - gamma Z) dt + sqrt(epsilon) sigma dB + dL - dU  (reflected at 0 and d)
 *
 * where L (idleness) and U (loss) are the minimal nondecreasing regulators.
 */

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rou/errors.hpp"

namespace rou {

/// Absolute tolerance for boundary containment of simulated or reflected paths.
inline constexpr double kContainmentTol = 1e-12;

enum class BoundaryKind { Free, LowerAtZero, Double };

struct Boundary {
    BoundaryKind kind = BoundaryKind::Free;
    double upper = std::numeric_limits<double>::infinity(); ///< d, only meaningful for Double

    static Boundary free() { return {}; }
    static Boundary lower_at_zero() { return {BoundaryKind::LowerAtZero, std::numeric_limits<double>::infinity()}; }
    static Boundary two_sided(double d) { return {BoundaryKind::Double, d}; }

    bool has_lower() const noexcept { return kind != BoundaryKind::Free; }
    bool has_upper() const noexcept { return kind == BoundaryKind::Double; }

    friend bool operator==(const Boundary&, const Boundary&) = default;
};

inline std::string to_string(BoundaryKind k) {
    switch (k) {
    case BoundaryKind::Free: return "Free";
    case BoundaryKind::LowerAtZero: return "LowerAtZero";
    case BoundaryKind::Double: return "Double";
    }
    return "?";
}

struct ModelParams {
    double alpha = 1.0;   ///< drift level
    double gamma = 1.0;   ///< mean-reversion rate
    double sigma = 1.0;   ///< diffusion coefficient
    double epsilon = 1.0; ///< noise scale
    Boundary boundary{};
    double x0 = 0.0;

    double mean_level() const noexcept { return alpha / gamma; }
    double drift(double x) const noexcept { return alpha - gamma * x; }
    /// Effective diffusion coefficient sqrt(epsilon) * sigma.
    double noise_scale() const noexcept { return std::sqrt(epsilon) * sigma; }
    /// alpha/gamma < d; false for boundaries without an upper level.
    bool mean_below_upper() const noexcept {
        return boundary.has_upper() && mean_level() < boundary.upper;
    }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

enum class Validation {
    Strict,
    /// sigma = 0 or epsilon = 0 accepted; deterministic oracles in simulation tests only.
    AllowDegenerateNoise,
};

/// Returns `params` unchanged, or throws ValidationError naming the first violated assumption.
inline const ModelParams& validate(const ModelParams& params, Validation mode = Validation::Strict) {
    auto fail = [](const std::string& msg) { throw ValidationError(msg); };
    const bool strict = mode == Validation::Strict;

    if (!std::isfinite(params.alpha)) fail("alpha must be finite");
    if (!(params.gamma > 0.0) || !std::isfinite(params.gamma)) fail("gamma must be > 0");
    if (strict ? !(params.sigma > 0.0) : !(params.sigma >= 0.0)) fail(strict ? "sigma must be > 0" : "sigma must be >= 0");
    if (strict ? !(params.epsilon > 0.0) : !(params.epsilon >= 0.0))
        fail(strict ? "epsilon must be > 0" : "epsilon must be >= 0");
    if (!std::isfinite(params.sigma) || !std::isfinite(params.epsilon)) fail("sigma and epsilon must be finite");
    if (!std::isfinite(params.x0)) fail("x0 must be finite");

    switch (params.boundary.kind) {
    case BoundaryKind::Free:
        break;
    case BoundaryKind::LowerAtZero:
        if (!(params.alpha > 0.0)) fail("alpha must be > 0 for reflected lower boundary");
        if (!(params.x0 >= 0.0)) fail("x0 must be >= 0 for reflected lower boundary");
        break;
    case BoundaryKind::Double:
        if (!(params.boundary.upper > 0.0) || !std::isfinite(params.boundary.upper)) fail("d must be > 0");
        if (!(params.x0 >= 0.0 && params.x0 <= params.boundary.upper)) fail("x0 must lie in [0, d]");
        break;
    }
    return params;
}

/// Samples of a function on the uniform grid t0, t0 + dt, ..., t0 + (n-1) dt.
class DiscretePath {
public:
    DiscretePath(double t0, double dt, std::vector<double> values) : t0_(t0), dt_(dt), values_(std::move(values)) {
        if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw ValidationError("path dt must be > 0");
        if (values_.size() < 2) throw ValidationError("path needs at least two samples");
    }

    /// Samples `f` on [t0, t0 + n dt].
    template <class F>
    static DiscretePath sample(F&& f, double t0, double dt, std::size_t n_steps) {
        std::vector<double> v(n_steps + 1);
        for (std::size_t k = 0; k <= n_steps; ++k) v[k] = f(t0 + static_cast<double>(k) * dt);
        return DiscretePath(t0, dt, std::move(v));
    }

    double t0() const noexcept { return t0_; }
    double dt() const noexcept { return dt_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::size_t steps() const noexcept { return values_.size() - 1; }
    double horizon() const noexcept { return static_cast<double>(steps()) * dt_; }
    double time(std::size_t k) const noexcept { return t0_ + static_cast<double>(k) * dt_; }
    const std::vector<double>& values() const noexcept { return values_; }
    double operator[](std::size_t k) const noexcept { return values_[k]; }
    double front() const noexcept { return values_.front(); }
    double back() const noexcept { return values_.back(); }

    /// Piecewise-linear interpolation, clamped to the grid range.
    double at(double t) const noexcept {
        const double s = (t - t0_) / dt_;
        if (s <= 0.0) return values_.front();
        if (s >= static_cast<double>(steps())) return values_.back();
        const auto k = static_cast<std::size_t>(s);
        const double w = s - static_cast<double>(k);
        return (1.0 - w) * values_[k] + w * values_[k + 1];
    }

    /// Same grid, new values.
    DiscretePath with_values(std::vector<double> v) const { return DiscretePath(t0_, dt_, std::move(v)); }

    friend bool operator==(const DiscretePath&, const DiscretePath&) = default;

private:
    double t0_;
    double dt_;
    std::vector<double> values_;
};

/// Joint paths of a reflected process and its lower/upper regulators.
struct ReflectedTriple {
    DiscretePath state; ///< Y or Z
    DiscretePath lower; ///< L, nondecreasing from 0
    DiscretePath upper; ///< U, nondecreasing from 0
};

struct QueryParams {
    double horizon_T = 1.0;
    double level_b = 0.0;
    std::optional<double> level_a;

    friend bool operator==(const QueryParams&, const QueryParams&) = default;
};

inline const QueryParams& validate(const QueryParams& q) {
    if (!(q.horizon_T > 0.0) || !std::isfinite(q.horizon_T)) throw ValidationError("horizon_T must be > 0");
    if (!std::isfinite(q.level_b)) throw ValidationError("level_b must be finite");
    return q;
}

} // namespace rou
