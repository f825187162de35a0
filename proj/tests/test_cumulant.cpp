#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rou/cumulant.hpp"
#include "rou/stationary.hpp"

using namespace rou;

namespace {

ModelParams ref_params() {
    ModelParams p;
    p.boundary = Boundary::two_sided(2.0);
    p.x0 = 1.0;
    return p;
}

} // namespace

TEST(Shoot, ZeroPsiGivesZeroSlope) { EXPECT_EQ(shoot_h_prime_at_d(ref_params(), 0.0), 0.0); }

TEST(Shoot, MonotoneInPsi) {
    const auto p = ref_params();
    const double a = shoot_h_prime_at_d(p, -0.05), b = shoot_h_prime_at_d(p, 0.0), c = shoot_h_prime_at_d(p, 0.05);
    EXPECT_LT(a, b);
    EXPECT_LT(b, c);
}

TEST(Shoot, InadmissibleReported) {
    // Strongly negative psi drives y through zero inside [0, d].
    try {
        shoot_h_prime_at_d(ref_params(), -50.0);
        FAIL();
    } catch (const NumericalError& e) {
        EXPECT_NE(std::string(e.what()).find("admissible"), std::string::npos);
    }
    auto one = ref_params();
    one.boundary = Boundary::lower_at_zero();
    EXPECT_THROW(shoot_h_prime_at_d(one, 0.1), ValidationError);
}

TEST(Psi, RootResidualAndZero) {
    const auto p = ref_params();
    EXPECT_EQ(psi_of_theta(p, 0.0), 0.0);
    for (double th : {-3.0, -0.5, 0.3, 1.0, 4.0}) {
        const double psi = psi_of_theta(p, th);
        EXPECT_NEAR(shoot_h_prime_at_d(p, psi), th, 1e-10) << th;
    }
}

TEST(Psi, DerivativesMatchLossStatistics) {
    const auto p = ref_params();
    const auto s = loss_statistics(p);
    const double h = 1e-4;
    const double d1 = (psi_of_theta(p, h) - psi_of_theta(p, -h)) / (2.0 * h);
    EXPECT_NEAR(d1 / s.q_upper, 1.0, 1e-3);
    const double e = 1e-2;
    const double d2 = (psi_of_theta(p, e) + psi_of_theta(p, -e)) / (e * e);
    EXPECT_NEAR(d2 / s.eta2_upper, 1.0, 0.05);
}

TEST(Psi, ConvexNondecreasingCurve) {
    std::vector<double> thetas;
    for (int i = 0; i <= 40; ++i) thetas.push_back(-0.5 + 2.5 * i / 40.0);
    const auto curve = cumulant_curve(ref_params(), thetas);
    ASSERT_EQ(curve.psi_values.size(), thetas.size());
    for (std::size_t i = 1; i + 1 < thetas.size(); ++i)
        EXPECT_GE(curve.psi_values[i + 1] - 2.0 * curve.psi_values[i] + curve.psi_values[i - 1], -1e-8);
    for (std::size_t i = 1; i < thetas.size(); ++i)
        if (thetas[i - 1] >= 0.0) {
            EXPECT_GE(curve.psi_values[i], curve.psi_values[i - 1]);
        }
}

TEST(LossLd, TangencyAndNegativity) {
    const auto p = ref_params();
    const double q = loss_statistics(p).q_upper;
    EXPECT_NEAR(loss_ld_rate(p, q).rate, 0.0, 1e-8);
    EXPECT_LT(loss_ld_rate(p, 1.5 * q).rate, 0.0);
    EXPECT_EQ(loss_ld_rate(p, 0.5 * q).rate, 0.0);
    EXPECT_EQ(loss_ld_rate(p, 0.1 * q).argmax_theta, 0.0);
    EXPECT_THROW(loss_ld_rate(p, -1.0), ValidationError);
}

TEST(LossLd, IncreasingSeverity) {
    const auto p = ref_params();
    const double r1 = loss_ld_rate(p, 0.2).rate, r2 = loss_ld_rate(p, 0.3).rate;
    EXPECT_LT(r2, r1);
    EXPECT_LT(r1, 0.0);
}
