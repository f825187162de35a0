#pragma once

/**
 * @file estimate.hpp
 * @brief Monte Carlo checks of the long-run loss/idleness theory and tail estimators.
 */

#include <cmath>
#include <cstddef>
#include <vector>

#include "rou/errors.hpp"
#include "rou/model.hpp"
#include "rou/simulate.hpp"
#include "rou/stationary.hpp"
#include "rou/stats.hpp"
#include "rou/variational.hpp"

namespace rou {

enum class Regulator { Upper, Lower };

inline const char* to_string(Regulator r) { return r == Regulator::Upper ? "upper" : "lower"; }

struct CltReport {
    Regulator which = Regulator::Upper;
    double t_horizon = 0.0;
    std::size_t reps = 0;
    std::vector<double> normalized_samples; ///< (R_t - q t) / sqrt(t)
    double rate = 0.0;                      ///< q used for centring
    double mean_rate = 0.0;                 ///< average of R_t / t over replications
    double sample_mean = 0.0;
    double sample_var = 0.0;
    double target_var = 0.0;
    double ks_distance = 0.0;
};

namespace detail {

inline CltReport clt_report(Regulator which, double t, double q, double eta2, std::vector<double> raw) {
    CltReport r;
    r.which = which;
    r.t_horizon = t;
    r.reps = raw.size();
    r.rate = q;
    r.target_var = eta2;
    std::vector<double> rates(raw.size());
    r.normalized_samples.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        rates[i] = raw[i] / t;
        r.normalized_samples[i] = (raw[i] - q * t) / std::sqrt(t);
    }
    r.mean_rate = stats::mean_variance(rates).mean;
    const auto mv = stats::mean_variance(r.normalized_samples);
    r.sample_mean = mv.mean;
    r.sample_var = mv.variance;
    r.ks_distance = stats::ks_distance_normal(r.normalized_samples, 0.0, eta2);
    return r;
}

inline void require_clt_inputs(const ModelParams& params, std::size_t reps) {
    validate(params);
    if (params.boundary.kind != BoundaryKind::Double) throw ValidationError("clt check requires a Double boundary");
    if (reps < 100) throw ValidationError("reps must be >= 100");
}

} // namespace detail

struct CltPair {
    CltReport upper;
    CltReport lower;
};

/// CLT reports for U and L from one set of replications.
inline CltPair clt_check_both(const ModelParams& params, const SimConfig& cfg, std::size_t reps,
                              std::size_t workers = worker_count()) {
    detail::require_clt_inputs(params, reps);
    const LossStatistics ls = loss_statistics(params);
    const auto terminals = simulate_terminals(params, cfg, reps, workers);
    std::vector<double> u(reps), l(reps);
    for (std::size_t i = 0; i < reps; ++i) {
        u[i] = terminals[i].upper;
        l[i] = terminals[i].lower;
    }
    const double t = cfg.realized_T();
    return {detail::clt_report(Regulator::Upper, t, ls.q_upper, ls.eta2_upper, std::move(u)),
            detail::clt_report(Regulator::Lower, t, ls.q_lower, ls.eta2_lower, std::move(l))};
}

inline CltReport clt_check(const ModelParams& params, const SimConfig& cfg, std::size_t reps, Regulator which,
                           std::size_t workers = worker_count()) {
    auto both = clt_check_both(params, cfg, reps, workers);
    return which == Regulator::Upper ? std::move(both.upper) : std::move(both.lower);
}

struct QvReport {
    double lhs = 0.0; ///< t^{-1} s^2 int_0^t h'(Z_s)^2 ds along one path
    double rhs = 0.0; ///< eta_U^2 by quadrature
    double t_horizon = 0.0;

    double relative_error() const noexcept { return std::fabs(lhs - rhs) / rhs; }
};

/// Ergodic time average of the martingale quadratic variation against eta_U^2.
inline QvReport qv_ergodic_check(const ModelParams& params, const SimConfig& cfg) {
    check_sim_params(params, cfg);
    if (params.boundary.kind != BoundaryKind::Double) throw ValidationError("qv check requires a Double boundary");
    const HPrimeTable hp(params, HPrimeTable::Kind::Upper);
    const double s2 = params.epsilon * params.sigma * params.sigma;
    const std::size_t n = cfg.steps();

    // Trapezoid in time; partial sums in blocks to keep rounding bounded.
    std::vector<double> blocks;
    double acc = 0.0;
    run_path(params, cfg, [&](std::size_t k, double z, double, double) {
        const double f = hp(z);
        const double w = (k == 0 || k == n) ? 0.5 : 1.0;
        acc += w * f * f;
        if (k % 4096 == 4095) {
            blocks.push_back(acc);
            acc = 0.0;
        }
    });
    blocks.push_back(acc);
    QvReport r;
    r.t_horizon = cfg.realized_T();
    r.lhs = s2 * stats::pairwise_sum(blocks) * cfg.dt / r.t_horizon;
    r.rhs = loss_statistics(params).eta2_upper;
    return r;
}

struct TailEstimate {
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    std::size_t hits = 0;
    std::size_t reps = 0;
};

/// P(state_T >= b) with a 95% Clopper–Pearson interval; regime from params.boundary.
inline TailEstimate tail_probability(const ModelParams& params, SimConfig cfg, double T, double b, std::size_t reps) {
    validate(params);
    if (reps < 1) throw ValidationError("reps must be >= 1");
    cfg.horizon_T = T;
    (void)cfg.steps();
    TailEstimate e;
    e.reps = reps;
    if (params.boundary.has_lower() && b <= 0.0) {
        e.hits = reps;
    } else if (params.boundary.has_upper() && b > params.boundary.upper) {
        e.hits = 0;
    } else {
        e.hits = simulate_batch(params, cfg, reps, ExceedanceCounter{b}).hits;
    }
    e.p_hat = static_cast<double>(e.hits) / static_cast<double>(reps);
    if (e.hits == 0) {
        e.ci_low = 0.0;
        e.ci_high = stats::clopper_pearson_upper(0, reps);
    } else {
        const auto ci = stats::clopper_pearson(e.hits, reps);
        e.ci_low = ci.low;
        e.ci_high = ci.high;
    }
    return e;
}

/// Exact P(X_T >= b) for the free OU process.
inline double ou_exact_tail(const ModelParams& params, double T, double b) noexcept {
    return std::exp(ou_log_tail(params, T, b));
}

} // namespace rou
