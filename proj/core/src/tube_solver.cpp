#include "gelfand/tube_solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "gelfand/errors.hpp"

namespace gelfand {

namespace {

double sup_abs(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s = std::max(s, std::abs(v));
    return s;
}

// Radial profile with nodal derivatives from three-point differences (for Hermite interpolation).
RadialProfile profile_from_values(int m, const RadialGrid& grid, std::vector<double> values) {
    RadialProfile p;
    p.m = m;
    p.grid = grid;
    const auto& r = grid.r;
    const std::size_t n = r.size();
    p.derivatives.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hm = r[i] - r[i - 1], hp = r[i + 1] - r[i];
        const double dp = (values[i + 1] - values[i]) / hp, dm = (values[i] - values[i - 1]) / hm;
        p.derivatives[i] = (hm * dp + hp * dm) / (hp + hm);
    }
    const double h1 = r[n - 1] - r[n - 2], h2 = r[n - 2] - r[n - 3];
    const double d1 = (values[n - 1] - values[n - 2]) / h1, d2 = (values[n - 2] - values[n - 3]) / h2;
    p.derivatives[n - 1] = d1 + h1 * (d1 - d2) / (h1 + h2);
    p.values = std::move(values);
    p.a = p.values.front();
    return p;
}

TubeField radial_field(const RadialProfile& p, const TubeGrid& grid) {
    return build_u_eps(p, grid);
}

std::vector<double> nonlinear_rhs(const std::vector<double>& r, const std::vector<double>& pot,
                                  const std::vector<double>& v) {
    std::vector<double> out(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[i] + pot[i] * (std::expm1(v[i]) - v[i]);
    return out;
}

}  // namespace

ResidualReport residual(const TubeField& field, double lambda) {
    const FermiOperator lap = FermiOperator::with_potential(field.grid, std::vector<double>(field.grid.size(), 0.0));
    ResidualReport rep;
    rep.values = lap.laplacian(field.values);
    for (std::size_t i = 0; i < rep.values.size(); ++i) rep.values[i] += lambda * std::exp(field.values[i]);
    rep.sup = sup_abs(rep.values);
    rep.constant = rep.sup / field.grid.eps;
    return rep;
}

WEpsReport build_w_eps(const SupersolutionProfile& W, const RadialProfile& base, const TubeGrid& grid) {
    if (W.m != base.m || base.m != grid.m()) throw DimensionMismatch("build_w_eps: dimensions differ");
    const RadialProfile wprof = profile_from_values(W.m, W.grid, W.values);
    WEpsReport rep;
    rep.field = radial_field(wprof, grid);

    // The fields are t-independent, so a short periodic grid with the same fiber gives the
    // same nodal values of eps^2 Delta w + lambda e^u w at any eps.
    auto lhs_sup = [&](double eps) {
        TubeGrid g = grid;
        g.eps = eps;
        g.n_t = 4;
        const TubeField u = radial_field(base, g);
        const FermiOperator op(u, base.lambda);
        std::vector<double> w(rep.field.values.begin(), rep.field.values.begin() + static_cast<std::ptrdiff_t>(g.size()));
        const std::vector<double> lw = op.apply(w);
        double s = -std::numeric_limits<double>::infinity();
        for (double v : lw) s = std::max(s, -v);
        return s;
    };

    rep.sup_lhs = lhs_sup(grid.eps);
    const double kappa = grid.geometry.curvature;
    if (kappa == 0.0) {
        rep.eps0 = std::numeric_limits<double>::infinity();
        rep.scan.emplace_back(grid.eps, rep.sup_lhs);
    } else {
        double eps = std::min(1.0, 0.95 / kappa);
        std::vector<std::pair<double, double>> scan;
        while (eps >= 1e-3) {
            scan.emplace_back(eps, lhs_sup(eps));
            eps *= 0.9;
        }
        std::reverse(scan.begin(), scan.end());  // ascending eps
        rep.eps0 = 0.0;
        for (const auto& [e, s] : scan) {
            if (s > -0.5) break;
            rep.eps0 = e;
        }
        rep.scan = std::move(scan);
    }
    if (rep.sup_lhs > -0.5)
        throw InequalityFails("eps^2 Delta w + lambda e^u w reaches " + std::to_string(rep.sup_lhs) + " > -1/2 at eps = " +
                                  std::to_string(grid.eps),
                              grid.eps, rep.eps0);
    return rep;
}

double comparison_excess(const std::vector<double>& phi, const std::vector<double>& f, const TubeField& w_eps) {
    const double fn = sup_abs(f);
    double excess = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < phi.size(); ++i) excess = std::max(excess, phi[i] - 2.0 * fn * w_eps.values[i]);
    return excess;
}

FixedPointResult fixed_point_solve(const RadialProfile& base, const FermiOperator& op, const LinearizedInverse& inverse,
                                   double ball_constant, const FixedPointOptions& opts) {
    const TubeGrid& grid = op.grid();
    const TubeField u_eps = build_u_eps(base, grid);
    const ResidualReport r0 = residual(u_eps, base.lambda);
    const std::vector<double>& pot = op.potential();
    const std::size_t n = grid.size();

    FixedPointResult res;
    res.r_sup = r0.sup;
    res.ball_radius = ball_constant * grid.eps;
    const double slack = 1e-12 + 1e-12 * res.ball_radius;

    std::vector<double> v = opts.initial ? *opts.initial : std::vector<double>(n, 0.0);
    if (v.size() != n) throw DimensionMismatch("fixed_point_solve: initial guess size");
    double prev_inc = 0.0;
    bool converged = false;
    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
        std::vector<double> next = inverse.solve(nonlinear_rhs(r0.values, pot, v));
        double inc = 0.0;
        for (std::size_t i = 0; i < n; ++i) inc = std::max(inc, std::abs(next[i] - v[i]));
        if (prev_inc > opts.ratio_floor && inc > opts.ratio_floor) res.contraction = std::max(res.contraction, inc / prev_inc);
        prev_inc = inc;
        v = std::move(next);
        res.increments.push_back(inc);
        res.iterations = it;
        const double vs = sup_abs(v);
        if (opts.log) {
            TubeField u{grid, u_eps.values};
            for (std::size_t i = 0; i < n; ++i) u.values[i] += v[i];
            opts.log(it, inc, residual(u, base.lambda).sup);
        }
        if (vs > res.ball_radius + slack)
            throw DivergedFromBall("fixed point left the ball: ||v|| = " + std::to_string(vs) + " > C eps = " +
                                   std::to_string(res.ball_radius));
        if (inc < opts.tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NoConvergence("fixed point did not converge in " + std::to_string(opts.max_iterations) + " iterations");

    res.v = TubeField{grid, v};
    res.u = TubeField{grid, u_eps.values};
    for (std::size_t i = 0; i < n; ++i) res.u.values[i] += v[i];
    res.v_sup = sup_abs(v);
    res.v_over_eps = res.v_sup / grid.eps;
    res.residual_sup = residual(res.u, base.lambda).sup;
    return res;
}

namespace {

struct BallSetup {
    double constant = 0.0;
    double b_w = 0.0;
    double b_fp = 0.0;
};

BallSetup ball_setup(const RadialProfile& base, const FermiOperator& op, const LinearizedInverse& inverse,
                     SolutionMode mode) {
    BallSetup b;
    const TubeField u_eps = build_u_eps(base, op.grid());
    const ResidualReport r0 = residual(u_eps, base.lambda);
    const double eps = op.grid().eps;
    if (mode == SolutionMode::Stable) {
        const Potential pot = potential_of(base);
        const SupersolutionProfile W = solve_supersolution(base.m, pot);
        b.b_w = W.bound;
        double s = 0.0;
        for (std::size_t i = 0; i < W.values.size(); ++i) s = std::max(s, std::abs(pot.values[i] * W.values[i]));
        b.b_fp = std::max(1.0, 2.0 * s);
        b.constant = 4.0 * (r0.sup / eps) * W.sup_value;
    } else {
        const std::vector<double> first = inverse.solve(r0.values);
        b.constant = 4.0 * sup_abs(first) / eps;
    }
    return b;
}

}  // namespace

FixedPointResult fixed_point_solve(const RadialProfile& base, const TubeGrid& grid, const FixedPointOptions& opts) {
    const FermiOperator op = linearized_operator(base, grid);
    const LinearizedInverse inverse(op, opts.linear);
    const BallSetup ball = ball_setup(base, op, inverse, opts.mode);
    const double c = opts.ball_constant > 0.0 ? opts.ball_constant : ball.constant;
    FixedPointResult res = fixed_point_solve(base, op, inverse, c, opts);
    res.b_w = ball.b_w;
    res.b_fp = ball.b_fp;
    return res;
}

RadialProfile first_mode_profile(const RadialProfile& base) {
    const RadialEigenpair ep = first_eigenpair(base.m, potential_of(base));
    return profile_from_values(base.m, base.grid, ep.phi);
}

Decomposition decompose_eigenfield(const TubeGrid& grid, const std::vector<double>& v, const RadialProfile& phi1,
                                   double gamma) {
    if (v.size() != grid.size()) throw DimensionMismatch("decompose_eigenfield: field size");
    if (phi1.m != grid.m()) throw DimensionMismatch("decompose_eigenfield: fiber dimension");
    const FiberStencil flat = FiberStencil::build(grid, true);
    const std::size_t nf = grid.fiber_size(), nt = grid.n_t;
    std::vector<double> phi(nf);
    double pp = 0.0;
    for (std::size_t f = 0; f < nf; ++f) {
        phi[f] = phi1.value_at(grid.radius(f));
        pp += flat.volume[f] * phi[f] * phi[f];
    }
    Decomposition d;
    d.psi.resize(nt);
    d.w.resize(v.size());
    double vmax_fiber = 0.0;
    for (std::size_t j = 0; j < nt; ++j) {
        const double* vj = v.data() + j * nf;
        double proj = 0.0, vv = 0.0;
        for (std::size_t f = 0; f < nf; ++f) {
            proj += flat.volume[f] * vj[f] * phi[f];
            vv += flat.volume[f] * vj[f] * vj[f];
        }
        d.psi[j] = proj / pp;
        vmax_fiber = std::max(vmax_fiber, std::sqrt(vv));
        for (std::size_t f = 0; f < nf; ++f) d.w[j * nf + f] = vj[f] - phi[f] * d.psi[j];
    }
    for (std::size_t j = 0; j < nt; ++j) {
        double ip = 0.0;
        for (std::size_t f = 0; f < nf; ++f) ip += flat.volume[f] * d.w[j * nf + f] * phi[f];
        if (vmax_fiber > 0.0) d.orthogonality = std::max(d.orthogonality, std::abs(ip) / (std::sqrt(pp) * vmax_fiber));
    }
    // Energies in the product measure; gradient in scaled form eps^2 |d_t w|^2 + |grad_z w|^2.
    const FermiOperator lap = FermiOperator::with_potential(grid, std::vector<double>(grid.size(), 0.0)).product_metric();
    const std::vector<double> kw = lap.apply_weighted(d.w);
    double grad = 0.0, ww = 0.0, vv = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        grad += d.w[i] * kw[i];
        ww += lap.mass()[i] * d.w[i] * d.w[i];
        vv += lap.mass()[i] * v[i] * v[i];
    }
    d.w_fraction = vv > 0.0 ? std::sqrt(ww / vv) : 0.0;
    const double denom = std::abs(gamma) * grid.eps * vv;
    d.energy_ratio = denom > 0.0 ? (grad + ww) / denom : std::numeric_limits<double>::infinity();
    return d;
}

UniquenessReport uniqueness_check(const RadialProfile& base, const TubeGrid& grid, std::size_t trials,
                                  std::uint64_t seed, double agree_tol) {
    const FermiOperator op = linearized_operator(base, grid);
    const LinearizedInverse inverse(op);
    const BallSetup ball = ball_setup(base, op, inverse, SolutionMode::Stable);
    FixedPointOptions opts;
    const FixedPointResult ref = fixed_point_solve(base, op, inverse, ball.constant, opts);

    UniquenessReport rep;
    rep.trials = trials;
    rep.iterations.push_back(ref.iterations);
    const double radius = ball.constant * grid.eps;
    const std::size_t n = grid.size();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    auto compare = [&](const FixedPointResult& other) {
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(other.u.values[i] - ref.u.values[i]));
        rep.max_difference = std::max(rep.max_difference, diff);
        // Convexity: (e^{u2} - e^{u1} - e^{u2} v+) v+ <= 0 pointwise, v = u2 - u1; both orderings.
        for (int swap = 0; swap < 2; ++swap) {
            const auto& u1 = swap ? other.u.values : ref.u.values;
            const auto& u2 = swap ? ref.u.values : other.u.values;
            double integral = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = u2[i] - u1[i];
                if (d <= 0.0) continue;
                integral += op.mass()[i] * std::exp(u1[i]) * (std::expm1(d) - std::exp(d) * d) * d;
            }
            rep.max_convexity = std::max(rep.max_convexity, integral);
        }
    };
    if (ref.u.values.empty()) return rep;

    // Start from the supersolution-shaped corner of the ball.
    {
        const SupersolutionProfile W = solve_supersolution(base.m, potential_of(base));
        const TubeField w = build_u_eps(profile_from_values(W.m, W.grid, W.values), grid);
        FixedPointOptions o = opts;
        const double scale = W.sup_value > 0.0 ? 0.5 * radius / W.sup_value : 0.0;
        std::vector<double> v0(n);
        for (std::size_t i = 0; i < n; ++i) v0[i] = scale * w.values[i];
        o.initial = std::move(v0);
        const FixedPointResult r = fixed_point_solve(base, op, inverse, ball.constant, o);
        rep.iterations.push_back(r.iterations);
        compare(r);
    }
    for (std::size_t k = 0; k < trials; ++k) {
        FixedPointOptions o = opts;
        std::vector<double> v0(n);
        for (auto& x : v0) x = 0.5 * radius * unit(rng);
        o.initial = std::move(v0);
        const FixedPointResult r = fixed_point_solve(base, op, inverse, ball.constant, o);
        rep.iterations.push_back(r.iterations);
        compare(r);
    }
    if (rep.max_difference > agree_tol)
        throw MultipleStableSolutions("stable fixed points differ by " + std::to_string(rep.max_difference));
    return rep;
}

QuadraticForms quadratic_forms(const FermiOperator& op, const std::vector<double>& v) {
    if (v.size() != op.size()) throw DimensionMismatch("quadratic_forms: field size");
    const FermiOperator flat = op.product_metric();
    const std::vector<double> kt = op.apply_weighted(v);
    const std::vector<double> kh = flat.apply_weighted(v);
    QuadraticForms q;
    double pot = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        q.q_tilde += v[i] * kt[i];
        q.q_hat += v[i] * kh[i];
        pot += flat.mass()[i] * flat.potential()[i] * v[i] * v[i];
    }
    q.energy = q.q_hat + 2.0 * pot;
    const double eps = op.grid().eps, kappa = op.grid().geometry.curvature;
    q.constant = kappa / (1.0 - kappa * eps);
    q.bound_holds = std::abs(q.q_hat - q.q_tilde) <= q.constant * eps * q.energy * (1.0 + 1e-12) + 1e-14;
    return q;
}

}  // namespace gelfand
