#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "gelfand/fermi_operator.hpp"
#include "gelfand/radial_core.hpp"
#include "gelfand/spectral.hpp"
#include "gelfand/tube_eigen.hpp"
#include "gelfand/tube_linear.hpp"

namespace gelfand {

struct ResidualReport {
    double sup = 0.0;       // max |eps^2 Delta u + lambda e^u| over unknowns
    double constant = 0.0;  // sup / eps
    std::vector<double> values;
};

/// eps^2 Delta u + lambda e^u on the interior nodes of the tube.
ResidualReport residual(const TubeField& field, double lambda);

struct WEpsReport {
    TubeField field;            // w_eps(t, z) = W(|z|)
    double sup_lhs = 0.0;       // max of eps^2 Delta w + lambda e^{u_eps} w at the grid eps
    double eps0 = 0.0;          // inequality <= -1/2 holds for every scanned eps <= eps0 (inf if kappa = 0)
    std::vector<std::pair<double, double>> scan;  // (eps, sup_lhs)
};

/// Builds w_eps from the supersolution W of the base profile and checks
/// eps^2 Delta w_eps + lambda e^{u_eps} w_eps <= -1/2. Throws InequalityFails at the grid eps.
WEpsReport build_w_eps(const SupersolutionProfile& W, const RadialProfile& base, const TubeGrid& grid);

/// max over nodes of phi - 2 ||f||_inf w (<= 0 when the comparison bound holds).
double comparison_excess(const std::vector<double>& phi, const std::vector<double>& f, const TubeField& w_eps);

enum class SolutionMode { Stable, Unstable };

struct FixedPointOptions {
    SolutionMode mode = SolutionMode::Stable;
    double tol = 1e-10;                 // sup norm of successive increments
    std::size_t max_iterations = 200;
    double ball_constant = 0.0;         // 0: automatic (see below)
    double ratio_floor = 1e-12;         // increments below this do not enter the contraction estimate
    std::optional<std::vector<double>> initial;   // v_0, defaults to 0
    std::function<void(std::size_t iter, double increment, double residual)> log;
    LinearOptions linear{};
};

struct FixedPointResult {
    TubeField v;
    TubeField u;                 // u_eps + v
    std::size_t iterations = 0;
    double contraction = 0.0;    // max ratio of successive increments
    std::vector<double> increments;
    double v_sup = 0.0;
    double v_over_eps = 0.0;
    double ball_radius = 0.0;    // C eps
    double residual_sup = 0.0;   // sup |eps^2 Delta u + lambda e^u| of the final u
    double r_sup = 0.0;          // sup of the initial residual R = eps^2 Delta u_eps + lambda e^{u_eps}
    double b_w = 0.0;            // sup bound of the supersolution (stable mode)
    double b_fp = 0.0;           // max(1, 2 ||lambda e^U W||_inf) (stable mode)
};

/// v = L^{-1}(R + lambda e^{u_eps}(e^v - 1 - v)) iterated from v_0.
/// Ball constant default: stable mode 4 (sup R / eps) sup W; unstable mode 4 ||L^{-1} R|| / eps.
FixedPointResult fixed_point_solve(const RadialProfile& base, const TubeGrid& grid, const FixedPointOptions& opts = {});

/// Same iteration with a prepared operator and inverse (reused across runs).
FixedPointResult fixed_point_solve(const RadialProfile& base, const FermiOperator& op, const LinearizedInverse& inverse,
                                   double ball_constant, const FixedPointOptions& opts);

struct Decomposition {
    std::vector<double> psi;      // per t node
    std::vector<double> w;        // remainder on the full grid
    double orthogonality = 0.0;   // max_t |<w(t,.), phi1>| / (||phi1|| ||v||)
    double energy_ratio = 0.0;    // (||grad w||^2 + ||w||^2) / (|gamma| eps ||v||^2)
    double w_fraction = 0.0;      // ||w|| / ||v||
};

/// v = phi1(z) psi(t) + w with fiberwise orthogonality, in the product measure.
Decomposition decompose_eigenfield(const TubeGrid& grid, const std::vector<double>& v, const RadialProfile& phi1,
                                   double gamma);

/// First Dirichlet eigenfunction of the radial operator as a profile (values on its grid).
RadialProfile first_mode_profile(const RadialProfile& base);

struct UniquenessReport {
    std::size_t trials = 0;
    double max_difference = 0.0;   // sup-norm spread between converged solutions
    double max_convexity = -std::numeric_limits<double>::infinity();  // largest convexity integral (<= 0)
    std::vector<std::size_t> iterations;
};

/// fixed_point_solve from `trials` random v_0 inside the ball plus v_0 = 0.
/// Throws MultipleStableSolutions if two limits differ by more than 1e-8.
UniquenessReport uniqueness_check(const RadialProfile& base, const TubeGrid& grid, std::size_t trials,
                                  std::uint64_t seed = 20240611, double agree_tol = 1e-8);

struct QuadraticForms {
    double q_hat = 0.0;     // product metric and measure
    double q_tilde = 0.0;   // tube metric, h-weighted measure
    double energy = 0.0;    // eps^2 |d_t v|^2 + |grad_z v|^2 + V v^2, product measure
    double constant = 0.0;  // C with |q_hat - q_tilde| <= C eps energy
    bool bound_holds = true;
};

QuadraticForms quadratic_forms(const FermiOperator& op, const std::vector<double>& v);

}  // namespace gelfand
