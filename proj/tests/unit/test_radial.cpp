#include <gtest/gtest.h>

#include <cmath>

#include "gelfand/errors.hpp"
#include "gelfand/radial_core.hpp"
#include "gelfand/spectral.hpp"
#include "oracles.hpp"

using namespace gelfand;

TEST(RadialGrid, UniformAndGradedAreMonotone) {
    const auto u = RadialGrid::uniform(64);
    EXPECT_EQ(u.size(), 65u);
    EXPECT_DOUBLE_EQ(u.r.front(), 0.0);
    EXPECT_DOUBLE_EQ(u.r.back(), 1.0);
    const auto g = RadialGrid::graded(64, 0.05);
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g.r[i], g.r[i - 1]);
    EXPECT_LT(g.r[1], u.r[1]);
    EXPECT_NO_THROW(validate(g));
    RadialGrid bad{{0.0, 0.6, 0.5, 1.0}};
    EXPECT_THROW(validate(bad), InvalidArgument);
}

TEST(Shooting, FirstZeroMatchesSSpaceOracle) {
    for (int m : {1, 2, 3, 5, 9})
        for (double a : {0.3, 2.0, 6.0}) {
            const double lam = branch_lambda(m, a);
            const double ref = oracle::lambda_of_a(m, a);
            EXPECT_NEAR(lam, ref, 1e-8 * ref) << "m=" << m << " a=" << a;
        }
}

TEST(Shooting, ClosedFormLambdaOfA) {
    for (double a : {0.01, 0.5, 1.5, 4.0, 10.0}) {
        EXPECT_NEAR(branch_lambda(1, a), oracle::lambda_1d(a), 1e-10) << a;
        EXPECT_NEAR(branch_lambda(2, a), oracle::lambda_2d(a), 1e-10) << a;
    }
}

TEST(Shooting, ZeroCentreAndBadInput) {
    EXPECT_EQ(shoot_first_zero(3, 0.0), 0.0);
    EXPECT_THROW(shoot_first_zero(0, 1.0), InvalidArgument);
    EXPECT_THROW(shoot_first_zero(2, -1.0), InvalidArgument);
    EXPECT_THROW(shoot_first_zero(2, 1.0, 0.0), InvalidArgument);
}

TEST(RadialSolution, ProfileMatchesClosedForm2d) {
    const double a = 1.7;
    const auto p = radial_solution(2, a, 1024);
    const double lam = oracle::lambda_2d(a), b = std::exp(a);
    double err = 0.0;
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
        const double r = p.grid.r[i];
        err = std::max(err, std::abs(p.values[i] - (std::log(b) - 2.0 * std::log1p(lam * b * r * r / 8.0))));
    }
    EXPECT_LT(err, 1e-8);
    EXPECT_NEAR(p.values.back(), 0.0, 1e-10);
    // Hermite interpolation between nodes
    const double r = 0.123456;
    EXPECT_NEAR(p.value_at(r), std::log(b) - 2.0 * std::log1p(lam * b * r * r / 8.0), 1e-8);
    EXPECT_NEAR(p.derivative_at(r), -4.0 * lam * b * r / 8.0 / (1.0 + lam * b * r * r / 8.0), 1e-6);
}

TEST(RadialSolution, ResidualIsSecondOrder) {
    // residual of the discrete ODE on the grid decays ~ h^2
    const double r1 = ode_residual(radial_solution(3, 2.0, 256));
    const double r2 = ode_residual(radial_solution(3, 2.0, 512));
    EXPECT_GT(r1 / r2, 3.0);
    EXPECT_LT(r1 / r2, 5.0);
}

TEST(ClosedForms, OneDimensional) {
    const double lc = lambda_c_1d();
    const double ref = oracle::golden_max(oracle::lambda_1d, 0.0, 10.0);
    EXPECT_NEAR(lc, ref, 1e-10);
    const auto cf = closed_form_1d(0.5);
    ASSERT_EQ(cf.alphas.size(), 2u);
    for (double alpha : cf.alphas) EXPECT_NEAR(oracle::lambda_1d(2.0 * std::log(alpha)), 0.5, 1e-10);
    EXPECT_TRUE(closed_form_1d(lc + 1.0).alphas.empty());
    EXPECT_TRUE(closed_form_1d(lc).double_root);
}

TEST(ClosedForms, TwoDimensional) {
    for (double lam : {0.1, 1.0, 1.9}) {
        const auto cf = closed_form_2d(lam);
        EXPECT_NEAR(oracle::lambda_2d(std::log(cf.b1)), lam, 1e-12);
        EXPECT_NEAR(oracle::lambda_2d(std::log(cf.b2)), lam, 1e-9);
        EXPECT_LT(cf.b1, cf.b2);
    }
    EXPECT_THROW(closed_form_2d(2.5), OutOfRange);
    EXPECT_THROW(closed_form_2d(-1.0), InvalidArgument);
}

TEST(Extremal, LambdaStarLowDimensions) {
    EXPECT_NEAR(lambda_star(1), oracle::golden_max(oracle::lambda_1d, 0.0, 10.0), 1e-8);
    EXPECT_NEAR(lambda_star(2), 2.0, 1e-8);
    // m = 3: first maximum of lambda(a) located by a golden search on the oracle
    const double ref3 = oracle::golden_max([](double a) { return oracle::lambda_of_a(3, a); }, 1.0, 3.5);
    EXPECT_NEAR(lambda_star(3), ref3, 1e-6);
}

TEST(Sweep, TwoDimensionalStabilityChange) {
    SweepOptions o;
    o.spectral_intervals = 512;
    const auto d = sweep_branch(2, 4.0, 41, o);
    ASSERT_EQ(d.points.size(), 41u);
    EXPECT_NEAR(d.lambda_star, 2.0, 1e-2);
    ASSERT_EQ(d.folds.size(), 1u);
    EXPECT_NEAR(d.folds[0].a, std::log(4.0), 1e-6);
    for (const auto& p : d.points) {
        if (p.a < std::log(4.0) - 0.05) {
            EXPECT_TRUE(p.stable) << p.a;
            EXPECT_EQ(p.index, 0);
        }
        if (p.a > std::log(4.0) + 0.05) {
            EXPECT_FALSE(p.stable) << p.a;
            EXPECT_EQ(p.index, 1);
        }
    }
    EXPECT_TRUE(d.level_crossings.empty());
}

TEST(Sweep, ThreadCountDoesNotChangeResult) {
    SweepOptions one, many;
    one.threads = 1;
    many.threads = 4;
    one.spectral_intervals = many.spectral_intervals = 256;
    const auto a = sweep_branch(3, 10.0, 17, one);
    const auto b = sweep_branch(3, 10.0, 17, many);
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        EXPECT_EQ(a.points[i].lambda, b.points[i].lambda);
        EXPECT_EQ(a.points[i].mu1, b.points[i].mu1);
    }
}

TEST(Counting, SolutionsPerLambda) {
    EXPECT_EQ(count_solutions(1, 0.5, 20.0).count, 2u);
    EXPECT_EQ(count_solutions(1, 1.0, 20.0).count, 0u);
    EXPECT_EQ(count_solutions(2, 1.0, 20.0).count, 2u);
    EXPECT_EQ(count_solutions(5, 0.0, 20.0).count, 1u);
    EXPECT_EQ(count_solutions(11, 5.0, 40.0).count, 1u);
    EXPECT_THROW(count_solutions(2, -1.0, 20.0), InvalidArgument);
}
