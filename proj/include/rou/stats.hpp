#pragma once

// Small statistics helpers shared by the estimators.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "rou/normal.hpp"

namespace rou::stats {

/// Pairwise summation; result independent of how the input was produced.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 16) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

struct MeanVar {
    double mean = 0.0;
    double variance = 0.0; ///< unbiased (n - 1) sample variance
};

/// Two-pass mean and sample variance.
inline MeanVar mean_variance(std::span<const double> v) {
    MeanVar out;
    if (v.empty()) return out;
    const auto n = static_cast<double>(v.size());
    out.mean = pairwise_sum(v) / n;
    if (v.size() < 2) return out;
    std::vector<double> dev(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) dev[i] = (v[i] - out.mean) * (v[i] - out.mean);
    out.variance = pairwise_sum(dev) / (n - 1.0);
    return out;
}

struct Interval {
    double low = 0.0;
    double high = 1.0;
};

/// Exact (Clopper–Pearson) two-sided binomial interval at the given confidence.
inline Interval clopper_pearson(std::size_t hits, std::size_t trials, double confidence = 0.95) {
    if (trials == 0) return {0.0, 1.0};
    const double a = 0.5 * (1.0 - confidence);
    const auto k = static_cast<double>(hits);
    const auto n = static_cast<double>(trials);
    Interval ci;
    ci.low = hits == 0 ? 0.0 : boost::math::ibeta_inv(k, n - k + 1.0, a);
    ci.high = hits == trials ? 1.0 : boost::math::ibeta_inv(k + 1.0, n - k, 1.0 - a);
    return ci;
}

/// One-sided upper Clopper–Pearson bound; for zero hits this is 1 - (1 - confidence)^(1/n).
inline double clopper_pearson_upper(std::size_t hits, std::size_t trials, double confidence = 0.95) {
    if (trials == 0 || hits == trials) return 1.0;
    return boost::math::ibeta_inv(static_cast<double>(hits) + 1.0, static_cast<double>(trials - hits), confidence);
}

/// Kolmogorov–Smirnov distance between the sample and N(mean, variance).
inline double ks_distance_normal(std::vector<double> sample, double mean, double variance) {
    if (sample.empty()) return 0.0;
    std::sort(sample.begin(), sample.end());
    const double sd = std::sqrt(variance);
    const auto n = static_cast<double>(sample.size());
    double dist = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = normal::cdf((sample[i] - mean) / sd);
        dist = std::max({dist, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return dist;
}

} // namespace rou::stats
