#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "gelfand/errors.hpp"
#include "gelfand/radial_core.hpp"
#include "gelfand/spectral.hpp"
#include "oracles.hpp"

using namespace gelfand;

TEST(Multiplicity, SphericalHarmonics) {
    EXPECT_EQ(harmonic_multiplicity(0, 1), 1u);
    EXPECT_EQ(harmonic_multiplicity(1, 1), 1u);
    EXPECT_EQ(harmonic_multiplicity(0, 2), 1u);
    EXPECT_EQ(harmonic_multiplicity(3, 2), 2u);
    EXPECT_EQ(harmonic_multiplicity(2, 3), 5u);
    EXPECT_EQ(harmonic_multiplicity(2, 4), 9u);  // dim of degree-2 harmonics in R^4
}

TEST(RadialEigs, ZeroPotentialMatchesBesselZeros) {
    for (int m : {1, 2, 3, 4})
        for (int l : {0, 1, 2}) {
            if (m == 1 && l > 1) continue;
            const auto grid = RadialGrid::uniform(2048);
            const auto ev = radial_eigs(m, zero_potential(grid), l, 3);
            for (int k = 1; k <= 3; ++k) {
                const double ref = oracle::ball_eigenvalue(m, l, k);
                EXPECT_NEAR(ev[k - 1], ref, 2e-4 * ref) << "m=" << m << " l=" << l << " k=" << k;
            }
        }
}

TEST(RadialEigs, SecondOrderConvergence) {
    const double ref = oracle::ball_eigenvalue(3, 1, 1);
    const double e1 = std::abs(radial_eigs(3, zero_potential(RadialGrid::uniform(128)), 1, 1)[0] - ref);
    const double e2 = std::abs(radial_eigs(3, zero_potential(RadialGrid::uniform(256)), 1, 1)[0] - ref);
    EXPECT_NEAR(e1 / e2, 4.0, 0.5);
}

TEST(RadialEigs, DenseGeneralizedCrossCheck) {
    const auto prof = radial_solution(2, 3.0, 200);
    const auto pot = potential_of(prof);
    const RadialOperator op(2, prof.grid);
    for (int l : {0, 1}) {
        const SymTridiagonal a = op.stiffness(pot, l);
        const auto n = static_cast<Eigen::Index>(a.size());
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n), B = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            A(i, i) = a.diag[i];
            B(i, i) = op.volumes()[op.first_unknown(l) + i];
        }
        for (Eigen::Index i = 0; i + 1 < n; ++i) A(i, i + 1) = A(i + 1, i) = a.off[i];
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B);
        const auto ev = radial_eigs(op, pot, l, 4);
        for (Eigen::Index k = 0; k < 4; ++k) EXPECT_NEAR(ev[k], es.eigenvalues()(k), 1e-8 * (1 + std::abs(ev[k])));
    }
}

TEST(FullSpectrum, MergedRespectsMultiplicity) {
    const auto s = full_spectrum(2, zero_potential(RadialGrid::uniform(1024)), 6);
    ASSERT_EQ(s.merged.size(), 6u);
    EXPECT_NEAR(s.merged[0], oracle::ball_eigenvalue(2, 0, 1), 1e-3);
    EXPECT_NEAR(s.merged[1], oracle::ball_eigenvalue(2, 1, 1), 1e-3);
    EXPECT_DOUBLE_EQ(s.merged[1], s.merged[2]);
    for (std::size_t i = 1; i < s.merged.size(); ++i) EXPECT_LE(s.merged[i - 1], s.merged[i]);
}

TEST(FirstEigenpair, RayleighQuotientAndNormalisation) {
    const auto prof = radial_solution(1, 2.8955, 1024);
    const auto pot = potential_of(prof);
    const auto ep = first_eigenpair(1, pot);
    EXPECT_LT(ep.mu, 0.0);
    EXPECT_NEAR(ep.rayleigh, ep.mu, 1e-8);
    EXPECT_GT(ep.phi.front(), 0.0);
    EXPECT_EQ(ep.phi.back(), 0.0);
    for (double v : ep.phi) EXPECT_GE(v, -1e-12);
    EXPECT_EQ(morse_index(1, pot), 1u);
    EXPECT_NEAR(mu1(1, pot), ep.mu, 1e-9);
}

TEST(Spectral, GridMismatch) {
    const RadialOperator op(2, RadialGrid::uniform(64));
    EXPECT_THROW(op.check(zero_potential(RadialGrid::uniform(32))), GridMismatch);
}

TEST(Supersolution, SolvesMinusDeltaMinusVEqualsOne) {
    const auto prof = radial_solution(2, 0.5, 1024);
    const auto pot = potential_of(prof);
    auto W = solve_supersolution(2, pot);
    // finite-difference check of -W'' - W'/r - V W = 1 at interior nodes away from the pole
    const auto& r = W.grid.r;
    double worst = 0.0;
    for (std::size_t i = 50; i + 50 < r.size(); ++i) {
        const double h = r[i + 1] - r[i];
        const double d2 = (W.values[i + 1] - 2 * W.values[i] + W.values[i - 1]) / (h * h);
        const double d1 = (W.values[i + 1] - W.values[i - 1]) / (2 * h);
        worst = std::max(worst, std::abs(-d2 - d1 / r[i] - pot.values[i] * W.values[i] - 1.0));
    }
    EXPECT_LT(worst, 1e-3);
    EXPECT_GT(W.sup_value, 0.25);  // at V = 0 the sup is 1/4
    EXPECT_GE(verify_W_bounds(W), W.sup_value);
    // unstable base: no positive supersolution
    EXPECT_THROW(solve_supersolution(2, potential_of(radial_solution(2, 3.0, 256))), NotInvertible);
}
