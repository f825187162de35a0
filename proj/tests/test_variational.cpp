#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "rou/ode.hpp"
#include "rou/variational.hpp"

using namespace rou;

namespace {

ModelParams ref_params(double x0 = 1.0) {
    ModelParams p;
    p.x0 = x0;
    return p;
}

const double kRefRate = -1.0 / (1.0 - std::exp(-2.0));

ModelParams random_params(std::mt19937_64& rng, double& T, double& b) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ModelParams p;
    p.alpha = 0.2 + 2.0 * u(rng);
    p.gamma = 0.2 + 2.0 * u(rng);
    p.sigma = 0.2 + 2.0 * u(rng);
    const double m = p.alpha / p.gamma;
    const double d = m * (1.1 + 2.0 * u(rng));
    p.boundary = Boundary::two_sided(d);
    p.x0 = d * u(rng);
    T = 0.1 + 3.0 * u(rng);
    const double xT = zeroth_order_path(p, T);
    b = xT + (d - xT) * (0.05 + 0.95 * u(rng));
    return p;
}

} // namespace

TEST(ZerothOrder, ClosedForm) {
    const auto p = ref_params(0.0);
    EXPECT_EQ(zeroth_order_path(p, 0.0), 0.0);
    EXPECT_NEAR(zeroth_order_path(p, 1.0), 0.6321206, 1e-7);
    auto fixed = ref_params(p.mean_level());
    for (double t : {0.0, 0.5, 10.0}) EXPECT_DOUBLE_EQ(zeroth_order_path(fixed, t), 1.0);
    const auto grid = zeroth_order_path(p, 0.01, 100);
    EXPECT_EQ(grid.size(), 101u);
    EXPECT_DOUBLE_EQ(grid.back(), zeroth_order_path(p, 1.0));
}

TEST(ZerothOrder, MatchesOdeSolver) {
    auto p = ref_params(3.0);
    p.alpha = 0.7;
    p.gamma = 1.9;
    const auto sol = ode::integrate<1>([&](double, const ode::State<1>& y) { return ode::State<1>{p.drift(y[0])}; },
                                       0.0, 2.0, {p.x0}, {1e-13, 1e-13});
    EXPECT_NEAR(sol.y[0], zeroth_order_path(p, 2.0), 1e-11);
}

TEST(MostLikelyPath, ReferenceValueAndForms) {
    const auto f = most_likely_path(ref_params(), 1.0, 2.0);
    EXPECT_NEAR(f(0.5), 1.0 + std::sinh(0.5) / std::sinh(1.0), 1e-12);
    EXPECT_NEAR(f(0.5), 1.443409, 1e-6);
    EXPECT_NEAR(f(0.0), 1.0, 1e-12);
    EXPECT_NEAR(f(1.0), 2.0, 1e-12);
    for (double t = 0.0; t <= 1.0; t += 0.01) EXPECT_NEAR(f(t), f.bridge_form(t), 1e-10 * std::fabs(f(t)));
}

TEST(MostLikelyPath, ZeroCostContinuation) {
    auto p = ref_params(0.3);
    const double T = 2.0;
    const auto f = most_likely_path(p, T, zeroth_order_path(p, T));
    for (double t = 0.0; t <= T; t += 0.1) EXPECT_NEAR(f(t), zeroth_order_path(p, t), 1e-12);
}

TEST(MostLikelyPath, SolvesEulerLagrangeBvp) {
    // f'' = gamma^2 f - alpha gamma, f(0) = x0, f(T) = a; linear, so two shots fix the slope.
    auto p = ref_params(1.0);
    p.alpha = 0.8;
    p.gamma = 1.7;
    const double T = 1.3, a = 2.2;
    auto rhs = [&](double, const ode::State<2>& y) {
        return ode::State<2>{y[1], p.gamma * p.gamma * y[0] - p.alpha * p.gamma};
    };
    auto end = [&](double slope) { return ode::integrate<2>(rhs, 0.0, T, {p.x0, slope}, {1e-13, 1e-13}).y[0]; };
    const double e0 = end(0.0), e1 = end(1.0);
    const double slope = (a - e0) / (e1 - e0);
    const auto f = most_likely_path(p, T, a);
    const auto sol = ode::integrate<2>(rhs, 0.0, 0.6, {p.x0, slope}, {1e-13, 1e-13});
    EXPECT_NEAR(sol.y[0], f(0.6), 1e-9);
}

TEST(MostLikelyPath, RandomizedContainment) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        double T = 0.0, b = 0.0;
        const auto p = random_params(rng, T, b);
        const double d = p.boundary.upper;
        const auto f = most_likely_path(p, T, b);
        for (int k = 0; k <= 200; ++k) {
            const double v = f(T * k / 200.0);
            ASSERT_GE(v, -1e-12);
            ASSERT_LE(v, d + 1e-12 * d);
        }
    }
}

TEST(DecayRate, ReferenceCase) {
    const auto r = decay_rate(ref_params(), 1.0, 2.0, Regime::OU);
    EXPECT_NEAR(r.rate, kRefRate, 1e-15);
    EXPECT_NEAR(r.rate, -1.156518, 1e-6);
    EXPECT_DOUBLE_EQ(r.mlp.a, 2.0);
    EXPECT_EQ(r.regime, Regime::OU);
}

TEST(DecayRate, VanishesAtRarityBoundary) {
    const auto p = ref_params();
    const double xT = zeroth_order_path(p, 1.0);
    const double r = decay_rate(p, 1.0, xT + 1e-6, Regime::ROU).rate;
    EXPECT_LT(r, 0.0);
    EXPECT_GT(r, -1e-11);
}

TEST(DecayRate, LongHorizonLimit) {
    auto p = ref_params();
    EXPECT_DOUBLE_EQ(stationary_decay_rate(p, 2.0), -1.0);
    EXPECT_NEAR(decay_rate(p, 20.0, 2.0, Regime::OU).rate, -1.0, 1e-8);
}

TEST(DecayRate, Errors) {
    auto p = ref_params();
    try {
        decay_rate(p, 1.0, 0.5, Regime::OU);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("not a rare event"), std::string::npos);
    }
    p.boundary = Boundary::two_sided(1.5);
    try {
        decay_rate(p, 1.0, 2.0, Regime::DROU);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("upper boundary below target"), std::string::npos);
    }
    p.boundary = Boundary::two_sided(0.9);
    p.x0 = 0.5;
    try {
        decay_rate(p, 1.0, 0.85, Regime::DROU);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("assumption alpha/gamma < d violated"), std::string::npos);
    }
    p.boundary = Boundary::free();
    EXPECT_THROW(decay_rate(p, 1.0, 2.0, Regime::DROU), ValidationError);
}

TEST(DecayRate, RegimeInvariance) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 200; ++i) {
        double T = 0.0, b = 0.0;
        const auto p = random_params(rng, T, b);
        const double ou = decay_rate(p, T, b, Regime::OU).rate;
        EXPECT_EQ(ou, decay_rate(p, T, b, Regime::ROU).rate);
        EXPECT_EQ(ou, decay_rate(p, T, b, Regime::DROU).rate);
    }
}

TEST(RateFunctional, ZerothOrderPathCostsNothing) {
    const auto p = ref_params(0.0);
    const auto path = zeroth_order_path(p, 1e-3, 2000);
    EXPECT_NEAR(rate_functional(path, p, RateVariant::I), 0.0, 1e-10);
    EXPECT_NEAR(rate_functional(path, p, RateVariant::Iplus), 0.0, 1e-10);
}

TEST(RateFunctional, OptimizerAttainsDecayRate) {
    const auto r = decay_rate(ref_params(), 1.0, 2.0, Regime::OU);
    const double I = rate_functional(r.mlp.sample(1e-4), ref_params(), RateVariant::I);
    EXPECT_LT(std::fabs(I + r.rate) / -r.rate, 1e-5);
}

TEST(RateFunctional, ZeroPathOneSided) {
    auto p = ref_params(0.0);
    p.alpha = 1.3;
    p.sigma = 0.7;
    const double T = 2.0;
    const auto path = DiscretePath::sample([](double) { return 0.0; }, 0.0, 1e-3, 2000);
    EXPECT_NEAR(rate_functional(path, p, RateVariant::Iplus), p.alpha * p.alpha * T / (2.0 * p.sigma * p.sigma), 1e-10);
}

TEST(RateFunctional, NegativeBoundaryDriftIsDiscountedByIplus) {
    // b(0) = alpha < 0: sitting at zero is free under I+ but costs alpha^2 T / (2 sigma^2) under I.
    auto p = ref_params(0.0);
    p.alpha = -0.8;
    const auto path = DiscretePath::sample([](double) { return 0.0; }, 0.0, 1e-3, 1000);
    EXPECT_NEAR(rate_functional(path, p, RateVariant::I), 0.32, 1e-12);
    EXPECT_NEAR(rate_functional(path, p, RateVariant::Iplus), 0.0, 1e-12);
}

TEST(RateFunctional, LingeringAtUpperLevel) {
    const double T = 1.5;
    const auto stay = [&](double d) { return DiscretePath::sample([&](double) { return d; }, 0.0, 1e-3, 1500); };
    auto p = ref_params(0.5);
    p.boundary = Boundary::two_sided(0.5); // alpha/gamma > d: b(d)+ = 0.5 cancels the drift
    EXPECT_NEAR(rate_functional(stay(0.5), p, RateVariant::Iplusplus), 0.0, 1e-12);
    EXPECT_NEAR(rate_functional(stay(0.5), p, RateVariant::I), 0.25 * T / 2.0, 1e-12);
    p.boundary = Boundary::two_sided(2.0); // alpha/gamma < d: b(d) = -1, no correction
    p.x0 = 2.0;
    EXPECT_NEAR(rate_functional(stay(2.0), p, RateVariant::Iplusplus), T / 2.0, 1e-12);
}

TEST(RateFunctional, DomainAndStartChecks) {
    auto p = ref_params(0.0);
    const auto dip = DiscretePath::sample([](double t) { return -t; }, 0.0, 0.01, 100);
    EXPECT_EQ(rate_functional(dip, p, RateVariant::Iplus), std::numeric_limits<double>::infinity());
    EXPECT_TRUE(std::isfinite(rate_functional(dip, p, RateVariant::I)));
    p.boundary = Boundary::two_sided(0.5);
    const auto rise = DiscretePath::sample([](double t) { return t; }, 0.0, 0.01, 100);
    EXPECT_EQ(rate_functional(rise, p, RateVariant::Iplusplus), std::numeric_limits<double>::infinity());
    p.x0 = 0.2;
    EXPECT_THROW(rate_functional(rise, p, RateVariant::I), ValidationError);
    p.boundary = Boundary::free();
    p.x0 = 0.0;
    EXPECT_THROW(rate_functional(rise, p, RateVariant::Iplusplus), ValidationError);
}

TEST(RateFunctional, CorrectionsVanishOffBoundary) {
    auto p = ref_params(0.5);
    p.boundary = Boundary::two_sided(3.0);
    const auto path = DiscretePath::sample([](double t) { return 0.5 + 0.4 * std::sin(3.0 * t); }, 0.0, 1e-3, 2000);
    const double I = rate_functional(path, p, RateVariant::I);
    EXPECT_EQ(I, rate_functional(path, p, RateVariant::Iplus));
    EXPECT_EQ(I, rate_functional(path, p, RateVariant::Iplusplus));
}

TEST(RateFunctional, GeneralDriftCallback) {
    // b(x) = -x^3 along f(t) = t: integrand (1 + t^3)^2, integral over [0,1] = 1 + 1/2 + 1/7.
    const auto path = DiscretePath::sample([](double t) { return t; }, 0.0, 1e-4, 10000);
    const double v = rate_functional(path, [](double x) { return -x * x * x; }, 1.0, 0.0, RateVariant::I);
    EXPECT_NEAR(v, 0.5 * (1.0 + 0.5 + 1.0 / 7.0), 1e-7);
}

TEST(RateFunctional, LocalOptimalityUnderPerturbation) {
    const auto p = ref_params();
    const double T = 1.0, dt = 1e-4;
    const auto f = most_likely_path(p, T, 2.0);
    const auto base = f.sample(dt);
    const double I0 = rate_functional(base, p, RateVariant::I);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> coef(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double c1 = coef(rng), c2 = coef(rng), c3 = coef(rng);
        for (double delta : {1e-3, -1e-3}) {
            std::vector<double> v(base.values());
            for (std::size_t k = 0; k < v.size(); ++k) {
                const double s = std::numbers::pi * base.time(k) / T;
                v[k] += delta * (c1 * std::sin(s) + c2 * std::sin(2 * s) + c3 * std::sin(3 * s));
            }
            v.back() = base.back();
            ASSERT_GE(rate_functional(base.with_values(v), p, RateVariant::I), I0 - 1e-9);
        }
    }
}

TEST(EmpiricalDecay, GaussianSequenceMonotone) {
    const std::vector<double> eps{0.2, 0.1, 0.05, 0.02, 0.01};
    const auto seq = gaussian_decay_sequence(ref_params(), 1.0, 2.0, eps);
    for (std::size_t i = 1; i < seq.size(); ++i) {
        EXPECT_LT(std::fabs(seq[i] - kRefRate), std::fabs(seq[i - 1] - kRefRate));
        EXPECT_LT(seq[i], 0.0);
    }
    EXPECT_LT(std::fabs(seq.back() / kRefRate - 1.0), 0.08);
}

TEST(EmpiricalDecay, CoupledRouMatchesOu) {
    const double T = 1.0, b = 2.0;
    const SimConfig cfg{1e-3, T, 606};
    auto p = ref_params();
    const auto ou = empirical_decay_rate(p, T, b, {0.5}, 20000, cfg).front();
    p.boundary = Boundary::lower_at_zero();
    const auto rou = empirical_decay_rate(p, T, b, {0.5}, 20000, cfg).front();
    ASSERT_FALSE(ou.below_resolution);
    ASSERT_FALSE(rou.below_resolution);
    EXPECT_LT(std::fabs(rou.value - ou.value), 2.0 * std::hypot(ou.std_error, rou.std_error));
    EXPECT_GE(rou.hits, ou.hits);
}

TEST(EmpiricalDecay, HugeNoiseNonRare) {
    const auto pt = empirical_decay_rate(ref_params(), 1.0, 2.0, {100.0}, 4000, SimConfig{1e-2, 1.0, 1}).front();
    auto big = ref_params();
    big.epsilon = 100.0;
    const double exact = std::exp(ou_log_tail(big, 1.0, 2.0));
    EXPECT_GT(exact, 0.3);
    EXPECT_NEAR(pt.p_hat, exact, 4.0 * std::sqrt(exact * (1.0 - exact) / 4000));
}

TEST(EmpiricalDecay, BelowResolutionFlagged) {
    const auto pts = empirical_decay_rate(ref_params(), 1.0, 4.0, {0.05}, 200, SimConfig{1e-2, 1.0, 1});
    ASSERT_EQ(pts.size(), 1u);
    EXPECT_TRUE(pts[0].below_resolution);
    EXPECT_TRUE(std::isnan(pts[0].value));
    EXPECT_NEAR(pts[0].bound, 0.05 * std::log(1.0 - std::pow(0.05, 1.0 / 200)), 1e-12);
    EXPECT_THROW(empirical_decay_rate(ref_params(), 1.0, 2.0, {0.1, 0.2}, 10, SimConfig{}), ValidationError);
    EXPECT_THROW(empirical_decay_rate(ref_params(), 1.0, 0.5, {0.1}, 10, SimConfig{}), ValidationError);
}
