#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "rou/model.hpp"

using namespace rou;

namespace {

ModelParams reference(Boundary b, double x0 = 0.0) {
    ModelParams p;
    p.epsilon = 0.1;
    p.boundary = b;
    p.x0 = x0;
    return p;
}

std::string message_of(const ModelParams& p) {
    try {
        validate(p);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST(Validate, AcceptsStandingAssumptions) {
    const auto p = reference(Boundary::lower_at_zero());
    EXPECT_EQ(validate(p), p);
}

TEST(Validate, DoubleBelowMeanFlagsFalse) {
    const auto p = reference(Boundary::two_sided(0.5));
    EXPECT_NO_THROW(validate(p));
    EXPECT_FALSE(p.mean_below_upper());
    EXPECT_TRUE(reference(Boundary::two_sided(2.0)).mean_below_upper());
}

TEST(Validate, NamesFirstViolation) {
    auto p = reference(Boundary::free());
    p.gamma = -1.0;
    EXPECT_EQ(message_of(p), "gamma must be > 0");

    p = reference(Boundary::lower_at_zero());
    p.alpha = -1.0;
    EXPECT_EQ(message_of(p), "alpha must be > 0 for reflected lower boundary");

    p = reference(Boundary::lower_at_zero(), -0.1);
    EXPECT_EQ(message_of(p), "x0 must be >= 0 for reflected lower boundary");

    p = reference(Boundary::two_sided(1.0), 1.5);
    EXPECT_EQ(message_of(p), "x0 must lie in [0, d]");

    p = reference(Boundary::two_sided(-1.0));
    EXPECT_EQ(message_of(p), "d must be > 0");

    p = reference(Boundary::free());
    p.sigma = 0.0;
    EXPECT_EQ(message_of(p), "sigma must be > 0");
    p.sigma = 1.0;
    p.epsilon = 0.0;
    EXPECT_EQ(message_of(p), "epsilon must be > 0");
}

TEST(Validate, DegenerateNoiseOnlyBehindFlag) {
    auto p = reference(Boundary::free());
    p.sigma = 0.0;
    EXPECT_THROW(validate(p), ValidationError);
    EXPECT_NO_THROW(validate(p, Validation::AllowDegenerateNoise));
}

TEST(Validate, FreeAllowsNegativeAlphaAndStart) {
    auto p = reference(Boundary::free(), -3.0);
    p.alpha = -1.0;
    EXPECT_NO_THROW(validate(p));
}

TEST(DiscretePath, Invariants) {
    EXPECT_THROW(DiscretePath(0.0, 0.0, {1.0, 2.0}), ValidationError);
    EXPECT_THROW(DiscretePath(0.0, 0.1, {1.0}), ValidationError);
    const auto p = DiscretePath::sample([](double t) { return 2.0 * t; }, 0.0, 0.25, 8);
    EXPECT_EQ(p.size(), 9u);
    EXPECT_EQ(p.steps(), 8u);
    EXPECT_DOUBLE_EQ(p.horizon(), 2.0);
    EXPECT_DOUBLE_EQ(p.back(), 4.0);
    EXPECT_DOUBLE_EQ(p.at(0.375), 0.75);
    EXPECT_DOUBLE_EQ(p.at(-1.0), 0.0);
    EXPECT_DOUBLE_EQ(p.at(9.0), 4.0);
}

TEST(QueryParams, Validation) {
    QueryParams q;
    q.horizon_T = 0.0;
    EXPECT_THROW(validate(q), ValidationError);
    q.horizon_T = 1.0;
    q.level_b = 2.0;
    EXPECT_NO_THROW(validate(q));
}
