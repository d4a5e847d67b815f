#include <cmath>

#include <gtest/gtest.h>

#include "artiq/distributions.hpp"

using namespace artiq;
using namespace artiq::dist;

TEST(Distributions, NormalBasics) {
    EXPECT_DOUBLE_EQ(cdf(Kind::normal, {}, 0.0), 0.5);
    EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-12);
    EXPECT_NEAR(normal_sf(3.0) + normal_cdf(3.0), 1.0, 1e-15);
}

TEST(Distributions, ChiSquareTwoDfClosedForm) {
    for (double x = 0.0; x <= 60.0; x += 0.37) EXPECT_NEAR(chi2_sf(x, 2), std::exp(-x / 2), 1e-12) << x;
    EXPECT_NEAR(cdf(Kind::chi2, {2}, 5.991), 1.0 - std::exp(-5.991 / 2), 1e-12);
    EXPECT_NEAR(1.0 - cdf(Kind::chi2, {2}, 5.991), 0.0500, 5e-5);
}

TEST(Distributions, FTwoDfClosedForm) {
    for (double d2 : {4.0, 6.0, 60.0, 5295.0})
        for (double x = 0.0; x <= 30.0; x += 0.29)
            EXPECT_NEAR(f_sf(x, 2, d2), std::exp(-d2 / 2 * std::log1p(2 * x / d2)), 1e-12) << d2 << " " << x;
    EXPECT_NEAR(f_sf(3.0, 2, 6), 0.125, 1e-14);
}

TEST(Distributions, StudentTKnownValues) {
    EXPECT_NEAR(student_t_cdf(2.228138851986, 10), 0.975, 1e-10);
    EXPECT_NEAR(student_t_cdf(1.0, 1), 0.75, 1e-14); // Cauchy
    EXPECT_NEAR(student_t_tail(0.0, 10), 0.5, 1e-15);
    for (double x = -8; x <= 8; x += 0.5)
        for (double df : {1.0, 2.5, 7.0, 30.0, 1000.0})
            EXPECT_LT(std::fabs(student_t_cdf(x, df) + student_t_cdf(-x, df) - 1.0), 1e-12);
}

TEST(Distributions, GammaAndBetaIdentities) {
    EXPECT_NEAR(gamma_p(1.0, 2.0), 1.0 - std::exp(-2.0), 1e-14);
    EXPECT_NEAR(gamma_p(3.5, 2.0) + gamma_q(3.5, 2.0), 1.0, 1e-14);
    EXPECT_NEAR(ibeta(1.0, 1.0, 0.3), 0.3, 1e-14);
    EXPECT_NEAR(ibeta(2.0, 3.0, 0.4) + ibetac(2.0, 3.0, 0.4, 0.6), 1.0, 1e-14);
    EXPECT_NEAR(ibeta(2.0, 2.0, 0.5), 0.5, 1e-14);
}

TEST(Distributions, StudentizedRangeTwoGroupsReducesToT) {
    EXPECT_NEAR(cdf(Kind::studentized_range, {10, 0, 2}, 2.228138851986 * std::sqrt(2.0)), 0.95, 1e-4);
    for (double df : {5.0, 10.0, 30.0, 120.0})
        for (double q : {0.5, 1.5, 2.5, 3.5, 5.0}) {
            const double viaT = 1.0 - 2.0 * student_t_sf(q / std::sqrt(2.0), df);
            EXPECT_NEAR(studentized_range_cdf(q, 2, df), viaT, 1e-4) << df << " " << q;
        }
}

TEST(Distributions, StudentizedRangeTableValues) {
    // Upper 5% points q(0.95; k, df) from scipy.stats.studentized_range.ppf.
    EXPECT_NEAR(studentized_range_sf(3.876776750013158, 3, 10), 0.05, 2e-4);
    EXPECT_NEAR(studentized_range_sf(3.577934725220134, 3, 20), 0.05, 2e-4);
    EXPECT_NEAR(studentized_range_sf(3.977418221605432, 5, 60), 0.05, 2e-4);
    EXPECT_NEAR(studentized_range_sf(3.314493155398122, 3, 1e6), 0.05, 2e-4);
}

TEST(Distributions, InvalidParametersThrow) {
    EXPECT_THROW(cdf(Kind::t, {0}, 1.0), DomainError);
    EXPECT_THROW(cdf(Kind::F, {2, -1}, 1.0), DomainError);
    EXPECT_THROW(cdf(Kind::chi2, {-3}, 1.0), DomainError);
    EXPECT_THROW(cdf(Kind::studentized_range, {10, 0, 1}, 1.0), DomainError);
    EXPECT_THROW(cdf(Kind::studentized_range, {0, 0, 3}, 1.0), DomainError);
}

TEST(Distributions, CdfInUnitInterval) {
    for (double x : {-5.0, 0.0, 0.3, 2.0, 50.0, 1e6}) {
        for (auto v : {cdf(Kind::t, {3}, x), cdf(Kind::normal, {}, x)}) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
        if (x >= 0)
            for (auto v : {cdf(Kind::F, {3, 7}, x), cdf(Kind::chi2, {4}, x), cdf(Kind::studentized_range, {12, 0, 4}, x)}) {
                EXPECT_GE(v, 0.0);
                EXPECT_LE(v, 1.0);
            }
    }
}
