#include "gelfand/radial_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gelfand/errors.hpp"
#include "gelfand/parallel.hpp"
#include "gelfand/spectral.hpp"
#include "radial_trajectory.hpp"

namespace gelfand {

namespace {

using detail::TrajectoryState;
using detail::UniversalTrajectory;

detail::TrajectoryConfig trajectory_config(const ShootingConfig& cfg) {
    return {cfg.step, cfg.s0};
}

void check_dim(int m) {
    if (m < 1) throw InvalidArgument("dimension m must be >= 1, got " + std::to_string(m));
}

void check_centre(double a) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidArgument("centre value a must be finite and >= 0");
}

double t_limit(int m, double a, const ShootingConfig& cfg) {
    const double r_max = cfg.r_max_factor * std::sqrt(2.0 * m * std::max(a, 1.0));
    return 0.5 * a + std::log(r_max);
}

// Root of W(t) = -a on the shared trajectory, extending it as needed.
TrajectoryState locate(UniversalTrajectory& traj, double a, const ShootingConfig& cfg) {
    const int m = traj.dim();
    if (!traj.extend_to_a(a, t_limit(m, a, cfg)))
        throw NoZeroFound("no sign change of w before r_max (m = " + std::to_string(m) +
                          ", a = " + std::to_string(a) + ")");
    const TrajectoryState s = traj.locate_centre(a);
    if (s.t > t_limit(m, a, cfg)) throw NoZeroFound("first zero beyond r_max");
    return s;
}

double lambda_at(const UniversalTrajectory& traj, const TrajectoryState& s) {
    return std::exp(traj.log_lambda(s));
}

RadialProfile build_profile(const UniversalTrajectory& traj, double a, const TrajectoryState& root,
                            const RadialGrid& grid) {
    RadialProfile p;
    p.m = traj.dim();
    p.a = a;
    p.grid = grid;
    const std::size_t n = grid.size();
    p.values.assign(n, 0.0);
    p.derivatives.assign(n, 0.0);
    if (a == 0.0) return p;
    p.lambda = lambda_at(traj, root);
    const double tstar = root.t;
    p.values[0] = a;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double r = grid.r[i];
        const TrajectoryState s = traj.at(tstar + std::log(r));
        p.values[i] = a + traj.w(s);
        p.derivatives[i] = traj.wt(s) / r;
    }
    p.values[n - 1] = 0.0;
    p.derivatives[n - 1] = traj.wt(root);

    p.residual = ode_residual(p);
    return p;
}

}  // namespace

double ode_residual(const RadialProfile& p) {
    const auto& r = p.grid.r;
    const std::size_t n = r.size();
    if (p.values.size() != n) throw DimensionMismatch("profile values do not match its grid");
    double res = 0.0;
    const double m = p.m;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hm = r[i] - r[i - 1];
        const double hp = r[i + 1] - r[i];
        const double dp = (p.values[i + 1] - p.values[i]) / hp;
        const double dm = (p.values[i] - p.values[i - 1]) / hm;
        const double upp = 2.0 * (dp - dm) / (hp + hm);
        const double up = (hm * dp + hp * dm) / (hp + hm);
        res = std::max(res, std::abs(upp + (m - 1.0) / r[i] * up + p.lambda * std::exp(p.values[i])));
    }
    return res;
}

double shoot_first_zero(int m, double a, double tol, const ShootingConfig& cfg) {
    check_dim(m);
    check_centre(a);
    if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
    if (a == 0.0) return 0.0;
    UniversalTrajectory traj(m, trajectory_config(cfg));
    const TrajectoryState s = locate(traj, a, cfg);
    // w(R) = a + W(S) with S = e^{a/2} R.
    if (std::abs(a + traj.w(s)) > std::max(tol, 1e-13 * a))
        throw NoConvergence("first-zero bisection did not reach the requested tolerance");
    return std::exp(s.t - 0.5 * a);
}

double branch_lambda(int m, double a, const ShootingConfig& cfg) {
    check_dim(m);
    check_centre(a);
    if (a == 0.0) return 0.0;
    UniversalTrajectory traj(m, trajectory_config(cfg));
    return lambda_at(traj, locate(traj, a, cfg));
}

RadialProfile radial_solution(int m, double a, std::size_t intervals, const ShootingConfig& cfg) {
    return radial_solution(m, a, RadialGrid::uniform(intervals), cfg);
}

RadialProfile radial_solution(int m, double a, const RadialGrid& grid, const ShootingConfig& cfg) {
    check_dim(m);
    check_centre(a);
    validate(grid);
    UniversalTrajectory traj(m, trajectory_config(cfg));
    if (a == 0.0) return build_profile(traj, 0.0, {}, grid);
    const TrajectoryState root = locate(traj, a, cfg);
    return build_profile(traj, a, root, grid);
}

namespace {

std::size_t hermite_cell(const std::vector<double>& r, double x) {
    auto it = std::upper_bound(r.begin(), r.end(), x);
    std::size_t i = static_cast<std::size_t>(it - r.begin());
    if (i == 0) return 0;
    return std::min(i - 1, r.size() - 2);
}

}  // namespace

double RadialProfile::value_at(double r) const {
    r = std::clamp(r, 0.0, 1.0);
    const std::size_t i = hermite_cell(grid.r, r);
    const double h = grid.r[i + 1] - grid.r[i];
    const double x = (r - grid.r[i]) / h;
    const double h00 = (1.0 + 2.0 * x) * (1.0 - x) * (1.0 - x);
    const double h10 = x * (1.0 - x) * (1.0 - x);
    const double h01 = x * x * (3.0 - 2.0 * x);
    const double h11 = x * x * (x - 1.0);
    return h00 * values[i] + h10 * h * derivatives[i] + h01 * values[i + 1] + h11 * h * derivatives[i + 1];
}

double RadialProfile::derivative_at(double r) const {
    r = std::clamp(r, 0.0, 1.0);
    const std::size_t i = hermite_cell(grid.r, r);
    const double h = grid.r[i + 1] - grid.r[i];
    const double x = (r - grid.r[i]) / h;
    const double d00 = 6.0 * x * (x - 1.0) / h;
    const double d10 = (1.0 - x) * (1.0 - 3.0 * x);
    const double d01 = -d00;
    const double d11 = x * (3.0 * x - 2.0);
    return d00 * values[i] + d10 * derivatives[i] + d01 * values[i + 1] + d11 * derivatives[i + 1];
}

BifurcationDiagram sweep_branch(int m, double a_max, std::size_t steps, const SweepOptions& opts) {
    check_dim(m);
    if (!(a_max > 0.0) || !std::isfinite(a_max)) throw InvalidArgument("a_max must be positive");
    if (steps < 2) throw InvalidArgument("sweep needs at least 2 steps");
    const ShootingConfig& cfg = opts.shooting;

    UniversalTrajectory traj(m, trajectory_config(cfg));
    if (!traj.extend_to_a(a_max, t_limit(m, a_max, cfg)))
        throw NoZeroFound("sweep: no sign change before r_max at a = " + std::to_string(a_max));

    BifurcationDiagram d;
    d.m = m;
    d.a_max = a_max;
    d.points.resize(steps);

    // Continuous events (folds, crossings of 2(m-2)) between consecutive nodes.
    for (std::size_t i = 0; i + 1 < traj.node_count(); ++i) {
        const TrajectoryState& s0 = traj.node(i);
        const TrajectoryState& s1 = traj.node(i + 1);
        if (traj.centre(s0) > a_max) break;
        const double f0 = traj.fold_function(s0), f1 = traj.fold_function(s1);
        if ((f0 > 0.0) != (f1 > 0.0)) {
            const TrajectoryState f = traj.refine(i, [&](const TrajectoryState& s) { return traj.fold_function(s); });
            if (traj.centre(f) <= a_max) d.folds.push_back({traj.centre(f), lambda_at(traj, f), f0 > 0.0});
        }
        if (m >= 3) {
            const double g0 = traj.lambda_minus_level(s0), g1 = traj.lambda_minus_level(s1);
            if ((g0 > 0.0) != (g1 > 0.0)) {
                const TrajectoryState c = traj.refine(i, [&](const TrajectoryState& s) { return traj.lambda_minus_level(s); });
                if (traj.centre(c) <= a_max) d.level_crossings.push_back(traj.centre(c));
            }
        }
    }

    const UniversalTrajectory& shared = traj;
    parallel_for(
        steps,
        [&](std::size_t k) {
            BranchPoint& bp = d.points[k];
            bp.a = (k + 1 == steps) ? a_max : a_max * static_cast<double>(k) / static_cast<double>(steps - 1);
            if (bp.a == 0.0) {
                bp.lambda = 0.0;
                if (opts.with_spectra) {
                    const RadialGrid grid = RadialGrid::uniform(opts.spectral_intervals);
                    const Potential pot = zero_potential(grid);
                    bp.mu1 = mu1(m, pot);
                    bp.index = static_cast<int>(morse_index(m, pot));
                    bp.stable = bp.mu1 > 0.0;
                }
                return;
            }
            const TrajectoryState root = shared.locate_centre(bp.a);
            bp.lambda = lambda_at(shared, root);
            if (!opts.with_spectra) return;
            const double core = 4.0 * std::exp(-root.t);  // profile core width in r is ~ 1 / S
            const RadialGrid grid = opts.graded_spectral_grid ? RadialGrid::graded(opts.spectral_intervals, core)
                                                              : RadialGrid::uniform(opts.spectral_intervals);
            const RadialProfile p = build_profile(shared, bp.a, root, grid);
            const Potential pot = potential_of(p);
            bp.mu1 = mu1(m, pot);
            bp.index = static_cast<int>(morse_index(m, pot));
            bp.stable = bp.mu1 > 0.0;
        },
        opts.threads);

    d.lambda_star = 0.0;
    for (const auto& p : d.points) d.lambda_star = std::max(d.lambda_star, p.lambda);
    return d;
}

ExtremalPoint extremal_point(int m, double a_cap, const ShootingConfig& cfg) {
    check_dim(m);
    if (!(a_cap > 0.0)) throw InvalidArgument("a_cap must be positive");
    UniversalTrajectory traj(m, trajectory_config(cfg));
    if (!traj.extend_to_a(a_cap, t_limit(m, a_cap, cfg)))
        throw NoZeroFound("extremal_point: no sign change before r_max");
    const TrajectoryState end = traj.locate_centre(a_cap);
    ExtremalPoint best{a_cap, lambda_at(traj, end)};
    for (std::size_t i = 0; i + 1 < traj.node_count(); ++i) {
        const TrajectoryState& s0 = traj.node(i);
        if (traj.centre(s0) > a_cap) break;
        const double f0 = traj.fold_function(s0), f1 = traj.fold_function(traj.node(i + 1));
        if (f0 > 0.0 && f1 <= 0.0) {
            const TrajectoryState f = traj.refine(i, [&](const TrajectoryState& s) { return traj.fold_function(s); });
            const double a = traj.centre(f);
            const double lam = lambda_at(traj, f);
            if (a <= a_cap && lam > best.lambda) best = {a, lam};
        }
    }
    return best;
}

double lambda_star(int m, double a_cap) { return extremal_point(m, a_cap).lambda; }

double singular_level(int m) {
    check_dim(m);
    if (m < 3) throw InvalidArgument("singular_level: needs m >= 3");
    return 2.0 * (m - 2);
}

const char* to_string(Regime r) noexcept {
    switch (r) {
    case Regime::SingleFold: return "single-fold";
    case Regime::Oscillating: return "oscillating";
    case Regime::Monotone: return "monotone";
    }
    return "?";
}

Regime classify(const BifurcationDiagram& d) {
    if (d.folds.empty()) return Regime::Monotone;
    return d.folds.size() == 1 ? Regime::SingleFold : Regime::Oscillating;
}

SolutionCount count_solutions(int m, double lambda, double a_max, const ShootingConfig& cfg) {
    check_dim(m);
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be finite and >= 0");
    if (!(a_max > 0.0)) throw InvalidArgument("a_max must be positive");
    SolutionCount out;
    if (lambda == 0.0) {
        out.count = 1;  // u = 0; lambda(a) > 0 for every a > 0
        return out;
    }
    UniversalTrajectory traj(m, trajectory_config(cfg));
    if (!traj.extend_to_a(a_max, t_limit(m, a_max, cfg)))
        throw NoZeroFound("count_solutions: no sign change before r_max");
    auto g = [&](const TrajectoryState& s) { return traj.level_gap(s, lambda); };
    for (std::size_t i = 0; i + 1 < traj.node_count(); ++i) {
        const TrajectoryState& s0 = traj.node(i);
        const TrajectoryState& s1 = traj.node(i + 1);
        if (traj.centre(s0) > a_max) break;
        const double g0 = g(s0), g1 = g(s1);
        if ((g0 > 0.0) != (g1 > 0.0)) {
            const TrajectoryState c = traj.refine(i, g);
            const double a = traj.centre(c);
            if (a > 0.0 && a <= a_max) out.crossings.push_back(a);
        }
        const double f0 = traj.fold_function(s0), f1 = traj.fold_function(s1);
        if ((f0 > 0.0) != (f1 > 0.0)) {
            const TrajectoryState f = traj.refine(i, [&](const TrajectoryState& s) { return traj.fold_function(s); });
            const double lam = m >= 3 && f.offset ? traj.level() + traj.lambda_minus_level(f) : lambda_at(traj, f);
            if (traj.centre(f) <= a_max && std::abs(lam - lambda) < 1e-6) out.tangency = true;
        }
    }
    out.count = out.crossings.size();
    return out;
}

}  // namespace gelfand
