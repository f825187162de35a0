#pragma once

// Standard normal distribution functions.
//
// normal_cdf / normal_sf / log_normal_sf use W. J. Cody's rational Chebyshev
// approximations (Math. Comp. 1969, as refined in CALERF); absolute error is
// below 1e-15 over the real line and the log form stays finite far into the tail.
// normal_quantile is Wichura's AS 241 (PPND16), relative accuracy about 1e-16.

#include <array>
#include <cmath>
#include <limits>

namespace rou::normal {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
inline constexpr double kSqrt32 = 5.656854249492380195206754896838;

inline double pdf(double x) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

namespace detail {

// Lower and upper tail probabilities (or their logs) of the standard normal at x.
struct Tails {
    double lower;
    double upper;
};

inline Tails cody(double x, bool log_scale) noexcept {
    static constexpr std::array<double, 5> a = {2.2352520354606839287, 161.02823106855587881, 1067.6894854603709582,
                                                18154.981253343561249, 0.065682337918207449113};
    static constexpr std::array<double, 4> b = {47.20258190468824187, 976.09855173777669322, 10260.932208618978205,
                                                45507.789335026729956};
    static constexpr std::array<double, 9> c = {0.39894151208813466764, 8.8831497943883759412, 93.506656132177855979,
                                                597.27027639480026226,  2494.5375852903726711, 6848.1904505362823326,
                                                11602.651437647350124,  9842.7148383839780218, 1.0765576773720192317e-8};
    static constexpr std::array<double, 8> d = {22.266688044328115691, 235.38790178262499861, 1519.377599407554805,
                                                6485.558298266760755,  18615.571640885098091, 34900.952721145977266,
                                                38912.003286093271411, 19685.429676859990727};
    static constexpr std::array<double, 6> p = {0.21589853405795699,     0.1274011611602473639,  0.022235277870649807,
                                                0.001421619193227893466, 2.9112874951168792e-5, 0.02307344176494017303};
    static constexpr std::array<double, 5> q = {1.28426009614491121, 0.468238212480865118, 0.0659881378689285515,
                                                0.00378239633202758244, 7.29751555083966205e-5};

    const double y = std::fabs(x);
    double cum = 0.0;
    double ccum = 0.0;

    if (std::isnan(x)) return {x, x};

    if (y <= 0.67448975) {
        double xnum = 0.0;
        double xden = 0.0;
        if (y > std::numeric_limits<double>::epsilon() * 0.5) {
            const double xsq = x * x;
            xnum = a[4] * xsq;
            xden = xsq;
            for (int i = 0; i < 3; ++i) {
                xnum = (xnum + a[i]) * xsq;
                xden = (xden + b[i]) * xsq;
            }
        }
        const double temp = x * (xnum + a[3]) / (xden + b[3]);
        cum = 0.5 + temp;
        ccum = 0.5 - temp;
        if (log_scale) {
            cum = std::log(cum);
            ccum = std::log(ccum);
        }
        return {cum, ccum};
    }

    double temp = 0.0;
    if (y <= kSqrt32) {
        double xnum = c[8] * y;
        double xden = y;
        for (int i = 0; i < 7; ++i) {
            xnum = (xnum + c[i]) * y;
            xden = (xden + d[i]) * y;
        }
        temp = (xnum + c[7]) / (xden + d[7]);
    } else {
        if (!std::isfinite(y)) {
            temp = 0.0;
        } else {
            const double xsq = 1.0 / (x * x);
            double xnum = p[5] * xsq;
            double xden = xsq;
            for (int i = 0; i < 4; ++i) {
                xnum = (xnum + p[i]) * xsq;
                xden = (xden + q[i]) * xsq;
            }
            temp = xsq * (xnum + p[4]) / (xden + q[4]);
            temp = (kInvSqrt2Pi - temp) / y;
        }
    }

    // exp(-y^2/2) split as exp(-ysq^2/2) exp(-del/2) with ysq = y rounded to 1/16 to limit cancellation.
    const double ysq = std::trunc(y * 16.0) / 16.0;
    const double del = (y - ysq) * (y + ysq);
    double small_tail = 0.0;
    double big_tail = 0.0;
    if (log_scale) {
        small_tail = (-ysq * ysq * 0.5) + (-del * 0.5) + std::log(temp);
        big_tail = std::log1p(-std::exp(-ysq * ysq * 0.5) * std::exp(-del * 0.5) * temp);
    } else {
        small_tail = std::exp(-ysq * ysq * 0.5) * std::exp(-del * 0.5) * temp;
        big_tail = 1.0 - small_tail;
    }
    if (x > 0.0) return {big_tail, small_tail};
    return {small_tail, big_tail};
}

} // namespace detail

/// P(N <= x).
inline double cdf(double x) noexcept { return detail::cody(x, false).lower; }
/// P(N > x), accurate in the upper tail.
inline double sf(double x) noexcept { return detail::cody(x, false).upper; }
/// log P(N > x), finite for every finite x.
inline double log_sf(double x) noexcept { return detail::cody(x, true).upper; }

/// Inverse of cdf on (0, 1); returns -inf / +inf at 0 / 1.
inline double quantile(double p) noexcept {
    if (std::isnan(p) || p < 0.0 || p > 1.0) return std::numeric_limits<double>::quiet_NaN();
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();

    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r + 67265.770927008700853) * r +
                    45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
                 133.14166789178437745) * r + 3.387132872796366608) /
               (((((((r * 5226.495278852545925 + 28729.085735721942674) * r + 39307.89580009271061) * r +
                    21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
                 42.313330701600911252) * r + 1.0);
    }

    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val = 0.0;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
                   1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
                4.6303378461565452959) * r + 1.42343711074968357734) /
              (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
                   0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
                2.05319162663775882187) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
                   0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
                5.4637849111641143699) * r + 6.6579046435011037772) /
              (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
                   7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
                0.59983220655588793769) * r + 1.0);
    }
    return q < 0.0 ? -val : val;
}

} // namespace rou::normal
