#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gelfand/circle_model.hpp"
#include "gelfand/errors.hpp"
#include "oracles.hpp"

using namespace gelfand;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST(Geometry, CircleAndFlat) {
    const auto c = CircleGeometry::circle(2.0, 1);
    EXPECT_DOUBLE_EQ(c.curvature, 0.5);
    EXPECT_DOUBLE_EQ(c.length, 2.0 * kTwoPi);
    EXPECT_EQ(c.ambient_dim(), 2);
    EXPECT_DOUBLE_EQ(c.h(1.0, 0.1), 0.95);
    EXPECT_THROW(c.check_eps(2.0), InvalidArgument);
    EXPECT_NO_THROW(c.check_eps(1.9));
    const auto f = CircleGeometry::flat(kTwoPi, 2);
    EXPECT_EQ(f.curvature, 0.0);
    EXPECT_NO_THROW(f.check_eps(5.0));
    EXPECT_THROW(CircleGeometry::circle(-1.0, 1), InvalidArgument);
}

TEST(Nu, PeriodicEigenvaluesWithMultiplicity) {
    const auto nu = nu_eigenvalues(kTwoPi, 7);
    const std::vector<double> ref{0, 1, 1, 4, 4, 9, 9};
    ASSERT_EQ(nu.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(nu[i], ref[i], 1e-12);
}

TEST(Resonance, ClosedFormAndOrdering) {
    const double mu = -14.665, length = kTwoPi;
    const auto s = resonant_eps(mu, length, 1.0, 0.05);
    ASSERT_FALSE(s.empty());
    for (std::size_t i = 1; i < s.size(); ++i) EXPECT_GT(s[i - 1], s[i]);
    for (double e : s) {
        const double k = std::round(std::sqrt(-mu) / e);
        EXPECT_NEAR(e, std::sqrt(-mu) / k, 1e-14);
        EXPECT_LE(e, 1.0);
        EXPECT_GE(e, 0.05);
    }
    EXPECT_TRUE(resonant_eps(2.0, length, 1.0, 0.01).empty());
}

TEST(Resonance, ProductSpectrumAndGap) {
    const std::vector<double> mu{-4.0, 10.0};
    const auto nu = nu_eigenvalues(kTwoPi, 41);
    const double eps = 0.3;
    const auto ps = product_spectrum(mu, nu, eps);
    EXPECT_EQ(ps.combined.size(), mu.size() * nu.size());
    double brute = 1e300;
    for (double m : mu)
        for (double n : nu) brute = std::min(brute, std::abs(m + eps * eps * n));
    const auto gap = spectral_gap(ps);
    EXPECT_NEAR(gap.delta, brute, 1e-14);
    EXPECT_TRUE(gap.has_bound);
    EXPECT_TRUE(gap.bound_holds);
    EXPECT_LE(gap.delta, gap.bound);
}

TEST(Morse, ProductIndexMatchesBruteForce) {
    const std::vector<double> mu{-3.966, 9.8, 30.0};
    for (double eps : {0.2, 0.1, 0.05, 0.013}) {
        const auto nu = nu_eigenvalues(kTwoPi, 2001);
        std::size_t brute = 0;
        for (double m : mu)
            for (double n : nu) brute += m + eps * eps * n < 0.0;
        EXPECT_EQ(morse_index_estimate(mu, kTwoPi, eps), brute) << eps;
        EXPECT_EQ(morse_index_estimate(mu, nu, eps), brute);
    }
}

TEST(Nonresonant, MeasureMatchesSampling) {
    const double mu = -1.0;
    for (double eps : {0.1, 0.025}) {
        const auto set = nonresonant_set(3, eps, mu, kTwoPi);
        const auto centres = resonant_eps(mu, kTwoPi, 3.0 * eps, 0.5 * eps);
        const double r = std::pow(eps, 3);
        const std::size_t samples = 400000;
        std::size_t good = 0;
        for (std::size_t i = 0; i < samples; ++i) {
            const double x = eps + eps * (i + 0.5) / samples;
            bool ok = true;
            for (double c : centres) ok = ok && std::abs(x - c) >= r;
            good += ok;
        }
        EXPECT_NEAR(set.measure, eps * static_cast<double>(good) / samples, 4.0 * eps / samples) << eps;
        EXPECT_NEAR(set.deficiency, eps - set.measure, 1e-15);
        for (const auto& [a, b] : set.intervals) EXPECT_LT(a, b);
    }
    EXPECT_THROW(nonresonant_set(1, 0.1, mu, kTwoPi), InvalidArgument);
}

TEST(Slope, FiniteDifferenceMatchesAnalytic) {
    const std::vector<double> mu{-2.0};
    const auto nu = nu_eigenvalues(kTwoPi, 9);
    const auto rows = eigenvalue_slope(mu, nu, 0.3, 1e-4, 1.0);
    ASSERT_FALSE(rows.empty());
    for (const auto& row : rows) EXPECT_NEAR(row.finite_difference, row.analytic, 1e-9);
}

TEST(Report, SweepRowsAndResonances) {
    const std::vector<double> mu{-1.0, 5.0};
    const std::vector<double> eps{0.1, 0.05};
    const auto rep = resonance_report(mu, kTwoPi, eps, 3, 0.02);
    EXPECT_EQ(rep.sweep.size(), 2u);
    EXPECT_EQ(rep.nonresonant.size(), 2u);
    EXPECT_DOUBLE_EQ(rep.mu1, -1.0);
    for (std::size_t i = 1; i < rep.resonant.size(); ++i) EXPECT_GT(rep.resonant[i - 1], rep.resonant[i]);
    EXPECT_EQ(rep.sweep[1].index, morse_index_estimate(mu, kTwoPi, 0.05));
}
