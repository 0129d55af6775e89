#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "gelfand/errors.hpp"
#include "gelfand/export.hpp"
#include "gelfand/fermi_operator.hpp"
#include "gelfand/spectral.hpp"
#include "gelfand/tube_eigen.hpp"
#include "gelfand/tube_linear.hpp"
#include "gelfand/tube_solver.hpp"
#include "oracles.hpp"

using namespace gelfand;

namespace {

// lower (stable) and upper branch at lambda = 0.5, m = 1
RadialProfile base_1d(bool upper) {
    const auto cf = closed_form_1d(0.5);
    return radial_solution(1, 2.0 * std::log(cf.alphas[upper ? 1 : 0]), 1024);
}

TubeGrid grid_1d(double eps, std::size_t nt = 32, std::size_t n1 = 64) {
    return TubeGrid::make(CircleGeometry::circle(1.0, 1), eps, nt, n1);
}

}  // namespace

TEST(Residual, ScalesLinearlyInEps) {
    const auto base = base_1d(false);
    std::vector<double> eps{0.1, 0.05, 0.025}, sup;
    for (double e : eps) sup.push_back(residual(build_u_eps(base, grid_1d(e)), base.lambda).sup);
    EXPECT_NEAR(oracle::loglog_slope(eps, sup), 1.0, 0.15);
    // flat control: only the fiber discretisation error, independent of eps
    const auto flat = [&](double e, std::size_t n1) {
        const auto g = TubeGrid::make(CircleGeometry::flat(2.0 * std::numbers::pi, 1), e, 16, n1);
        return residual(build_u_eps(base, g), base.lambda).sup;
    };
    EXPECT_NEAR(flat(0.1, 64), flat(0.05, 64), 1e-12);
    EXPECT_NEAR(flat(0.1, 64) / flat(0.1, 128), 4.0, 0.5);
}

TEST(WEps, InequalityAndComparison) {
    const auto base = base_1d(false);
    const auto W = solve_supersolution(1, potential_of(base));
    const auto g = grid_1d(0.1);
    const auto rep = build_w_eps(W, base, g);
    EXPECT_LE(rep.sup_lhs, -0.5);
    EXPECT_GE(rep.eps0, 0.1);
    EXPECT_FALSE(rep.scan.empty());

    const auto op = linearized_operator(base, g);
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<double> f(g.size());
        for (auto& x : f) x = u(rng);
        const auto phi = invert_L(op, TubeField{g, f}).solution;
        EXPECT_LE(comparison_excess(phi, f, rep.field), 0.0);
        std::vector<double> neg(phi.size());
        for (std::size_t i = 0; i < phi.size(); ++i) neg[i] = -phi[i];
        EXPECT_LE(comparison_excess(neg, f, rep.field), 0.0);
    }

    const auto flat = TubeGrid::make(CircleGeometry::flat(2.0 * std::numbers::pi, 1), 0.1, 16, 64);
    EXPECT_TRUE(std::isinf(build_w_eps(W, base, flat).eps0));
}

TEST(FixedPoint, StableSolveSatisfiesEquation) {
    const auto base = base_1d(false);
    const auto g = grid_1d(0.05);
    std::ostringstream log;
    FixedPointOptions o;
    o.log = JsonLinesLog(log);
    const auto res = fixed_point_solve(base, g, o);
    EXPECT_LT(res.residual_sup, 1e-9);
    EXPECT_LE(res.v_sup, res.ball_radius);
    EXPECT_LT(res.contraction, 0.1);
    EXPECT_GT(res.b_w, 0.0);
    EXPECT_GE(res.b_fp, 1.0);
    std::size_t lines = 0;
    for (char c : log.str()) lines += c == '\n';
    EXPECT_EQ(lines, res.iterations);
    EXPECT_NE(log.str().find("\"increment\""), std::string::npos);
}

TEST(FixedPoint, Failures) {
    const auto base = base_1d(false);
    const auto g = grid_1d(0.05);
    FixedPointOptions tight;
    tight.ball_constant = 1e-6;
    EXPECT_THROW(fixed_point_solve(base, g, tight), DivergedFromBall);
    FixedPointOptions short_run;
    short_run.max_iterations = 1;
    short_run.tol = 1e-300;
    EXPECT_THROW(fixed_point_solve(base, g, short_run), NoConvergence);
}

TEST(FixedPoint, UnstableBranchAtNonresonantEps) {
    const auto base = base_1d(true);
    const double m1 = mu1(1, potential_of(base));
    const auto s = resonant_eps(m1, 2.0 * std::numbers::pi, 0.3, 0.1);
    ASSERT_GE(s.size(), 2u);
    const double eps = 0.5 * (s[0] + s[1]);
    FixedPointOptions o;
    o.mode = SolutionMode::Unstable;
    const auto res = fixed_point_solve(base, grid_1d(eps, 64, 128), o);
    EXPECT_LT(res.residual_sup, 1e-9);
    EXPECT_GT(negative_count(linearized_operator(base, grid_1d(eps, 64, 128))), 0u);
}

TEST(Uniqueness, RandomStartsAgree) {
    const auto base = base_1d(false);
    const auto rep = uniqueness_check(base, grid_1d(0.1), 4);
    EXPECT_EQ(rep.trials, 4u);
    EXPECT_LE(rep.max_difference, 1e-8);
    EXPECT_LE(rep.max_convexity, 0.0);
    EXPECT_EQ(rep.iterations.size(), 6u);
}

TEST(Decomposition, EigenfieldSplitsAlongFirstMode) {
    const auto base = base_1d(true);
    const auto g = grid_1d(0.2, 32, 128);
    const auto op = linearized_operator(base, g);
    const auto eig = tube_eigs(op, 3);
    const auto phi1 = first_mode_profile(base);
    for (std::size_t k = 0; k < 3; ++k) {
        const auto d = decompose_eigenfield(g, eig.fields[k], phi1, eig.values[k]);
        EXPECT_LE(d.orthogonality, 1e-12);
        EXPECT_LT(d.w_fraction, 0.2);  // low modes live on phi1
        EXPECT_TRUE(std::isfinite(d.energy_ratio));
    }
    EXPECT_THROW(decompose_eigenfield(g, std::vector<double>(3), phi1, 1.0), DimensionMismatch);
}

TEST(QuadraticForms, CurvatureBound) {
    const auto base = base_1d(false);
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double eps : {0.3, 0.1}) {
        const auto op = linearized_operator(base, grid_1d(eps));
        std::vector<double> v(op.size());
        for (auto& x : v) x = u(rng);
        const auto q = quadratic_forms(op, v);
        EXPECT_TRUE(q.bound_holds) << eps;
        EXPECT_NEAR(q.constant, 1.0 / (1.0 - eps), 1e-14);
        EXPECT_GT(q.energy, 0.0);
    }
    const auto flat = linearized_operator(base, TubeGrid::make(CircleGeometry::flat(6.0, 1), 0.2, 16, 32));
    std::vector<double> v(flat.size(), 0.5);
    const auto q = quadratic_forms(flat, v);
    EXPECT_NEAR(q.q_hat, q.q_tilde, 1e-12 * std::abs(q.q_hat));
}
