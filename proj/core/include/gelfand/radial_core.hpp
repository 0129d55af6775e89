#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gelfand/radial_grid.hpp"

namespace gelfand {

/// Integration settings shared by every radial operation.
struct ShootingConfig {
    double step = 2e-3;         // RK4 step in t = ln s
    double s0 = 1e-5;           // start of the series region
    double r_max_factor = 10.0; // NoZeroFound once r exceeds factor * sqrt(2 m max(a, 1))
};

/// First zero R of w'' + (m-1)/r w' + e^w = 0, w(0) = a, w'(0) = 0.
/// The ball solution with centre value a then has lambda = R^2. Returns 0 for a = 0.
double shoot_first_zero(int m, double a, double tol = 1e-10, const ShootingConfig& cfg = {});

/// Radial solution u on [0, 1] of u'' + (m-1)/r u' + lambda e^u = 0, u(1) = 0, u(0) = a.
struct RadialProfile {
    int m = 1;
    double a = 0.0;
    double lambda = 0.0;
    RadialGrid grid;
    std::vector<double> values;
    std::vector<double> derivatives;  // du/dr at the grid nodes
    double residual = 0.0;            // max |discrete ODE residual| over interior nodes

    /// Piecewise cubic Hermite interpolation; r is clamped to [0, 1].
    [[nodiscard]] double value_at(double r) const;
    [[nodiscard]] double derivative_at(double r) const;
};

RadialProfile radial_solution(int m, double a, std::size_t intervals = 2048, const ShootingConfig& cfg = {});
RadialProfile radial_solution(int m, double a, const RadialGrid& grid, const ShootingConfig& cfg = {});

/// max |u'' + (m-1)/r u' + lambda e^u| at interior nodes, three-point differences.
double ode_residual(const RadialProfile& profile);

/// lambda(a) without building a profile.
double branch_lambda(int m, double a, const ShootingConfig& cfg = {});

struct BranchPoint {
    double a = 0.0;
    double lambda = 0.0;
    double mu1 = 0.0;
    int index = 0;
    bool stable = true;
};

struct Fold {
    double a = 0.0;
    double lambda = 0.0;
    bool maximum = true;  // local maximum of lambda(a) (otherwise a minimum)
};

struct BifurcationDiagram {
    int m = 1;
    std::vector<BranchPoint> points;
    double lambda_star = 0.0;  // max over sampled points
    std::vector<Fold> folds;   // every fold with a <= a_max, from the continuous trajectory
    std::vector<double> level_crossings;  // a where lambda(a) = 2(m-2); empty for m <= 2
    double a_max = 0.0;
};

struct SweepOptions {
    std::size_t spectral_intervals = 1024;
    bool graded_spectral_grid = true;  // cluster nodes in the profile core for large a
    bool with_spectra = true;          // fill mu1 / index (otherwise left at 0 / stable)
    unsigned threads = 0;
    ShootingConfig shooting{};
};

/// steps equally spaced centre values a_k = a_max k / (steps - 1), k = 0 .. steps - 1.
BifurcationDiagram sweep_branch(int m, double a_max, std::size_t steps, const SweepOptions& opts = {});

struct ExtremalPoint {
    double a = 0.0;
    double lambda = 0.0;
};

/// Maximum of lambda(a) over (0, a_cap], refined at folds by bisection on d lambda / da = 0.
ExtremalPoint extremal_point(int m, double a_cap = 60.0, const ShootingConfig& cfg = {});
double lambda_star(int m, double a_cap = 60.0);

/// 2(m - 2), the value lambda(a) approaches as a -> inf for m >= 3.
double singular_level(int m);

enum class Regime { SingleFold, Oscillating, Monotone };
const char* to_string(Regime r) noexcept;
/// From the folds of the continuous trajectory: none, one, or several.
Regime classify(const BifurcationDiagram& d);

struct SolutionCount {
    std::size_t count = 0;             // solutions with centre value in [0, a_max]
    std::vector<double> crossings;     // centre values a with lambda(a) = lambda
    bool tangency = false;             // a fold sits within 1e-6 of lambda: count is ambiguous
};

SolutionCount count_solutions(int m, double lambda, double a_max, const ShootingConfig& cfg = {});

/// Closed forms, m = 1: alpha = cosh(alpha sqrt(lambda / 2)), u(x) = 2 log(alpha sech(alpha sqrt(lambda/2) x)).
struct ClosedForm1d {
    double lambda = 0.0;
    std::vector<double> alphas;  // 0, 1 or 2 roots ascending
    bool double_root = false;

    [[nodiscard]] static double profile(double alpha, double lambda, double r);
};

/// Critical lambda for m = 1 (the two roots merge).
double lambda_c_1d();
ClosedForm1d closed_form_1d(double lambda, double double_root_tol = 1e-9);

/// m = 2: b_i = 32/lambda^2 (1 - lambda/4 + (-1)^i sqrt(1 - lambda/2)), u_i = log(b_i / (1 + lambda b_i r^2 / 8)^2).
struct ClosedForm2d {
    double lambda = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;

    [[nodiscard]] static double profile(double b, double lambda, double r);
};

ClosedForm2d closed_form_2d(double lambda);

/// Closed-form profile of one branch on a grid, packaged like a shooting result
/// (m = 1: branch 1 or 2 of alpha; m = 2: b_1 or b_2).
RadialProfile closed_form_profile(int m, double lambda, int branch, const RadialGrid& grid);

}  // namespace gelfand
