#include "gelfand/tube_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gelfand/errors.hpp"

namespace gelfand {

TubeGrid TubeGrid::make(const CircleGeometry& geometry, double eps, std::size_t n_t, std::size_t n1, std::size_t n2) {
    geometry.check_eps(eps);
    if (geometry.fiber_dim != 1 && geometry.fiber_dim != 2)
        throw InvalidArgument("tube grids exist for fiber dimension 1 and 2 only");
    if (n_t < 4) throw InvalidArgument("tube grid needs N_t >= 4");
    TubeGrid g;
    g.geometry = geometry;
    g.eps = eps;
    g.n_t = n_t;
    g.n1 = n1;
    g.n2 = geometry.fiber_dim == 1 ? 1 : n2;
    if (geometry.fiber_dim == 1 && n1 < 4) throw InvalidArgument("fiber grid needs >= 4 intervals");
    if (geometry.fiber_dim == 2 && (n1 < 3 || g.n2 < 8)) throw InvalidArgument("polar grid needs n_rho >= 3, n_theta >= 8");
    return g;
}

TubeGrid TubeGrid::defaults(const CircleGeometry& geometry, double eps) {
    if (geometry.fiber_dim == 1) return make(geometry, eps, 128, 256);
    return make(geometry, eps, 64, 24, 32);
}

std::size_t TubeGrid::resolving_nt(const CircleGeometry& geometry, double eps, double mu_min, double per_mode) {
    geometry.check_eps(eps);
    std::size_t nt = 16;
    if (!(mu_min < 0.0)) return nt;
    const double kmax = std::sqrt(-mu_min) * geometry.length / (2.0 * std::numbers::pi * eps);
    while (static_cast<double>(nt) < per_mode * kmax) nt *= 2;
    return nt;
}

double TubeGrid::dtheta() const noexcept {
    return 2.0 * std::numbers::pi / static_cast<double>(n2);
}

double TubeGrid::z1(std::size_t f) const noexcept {
    if (m() == 1) return -1.0 + dz() * static_cast<double>(f + 1);
    const std::size_t i = f / n2, j = f % n2;
    return (static_cast<double>(i) + 0.5) * drho() * std::cos(dtheta() * static_cast<double>(j));
}

double TubeGrid::z2(std::size_t f) const noexcept {
    if (m() == 1) return 0.0;
    const std::size_t i = f / n2, j = f % n2;
    return (static_cast<double>(i) + 0.5) * drho() * std::sin(dtheta() * static_cast<double>(j));
}

double TubeGrid::radius(std::size_t f) const noexcept {
    if (m() == 1) return std::abs(z1(f));
    return (static_cast<double>(f / n2) + 0.5) * drho();
}

TubeField TubeField::zeros(const TubeGrid& grid) {
    return {grid, std::vector<double>(grid.size(), 0.0)};
}

double TubeField::sup_norm() const {
    double s = 0.0;
    for (double v : values) s = std::max(s, std::abs(v));
    return s;
}

double TubeField::t_variation() const {
    const std::size_t nf = grid.fiber_size();
    double var = 0.0;
    for (std::size_t f = 0; f < nf; ++f) {
        double lo = values[f], hi = values[f];
        for (std::size_t jt = 1; jt < grid.n_t; ++jt) {
            lo = std::min(lo, values[jt * nf + f]);
            hi = std::max(hi, values[jt * nf + f]);
        }
        var = std::max(var, hi - lo);
    }
    return var;
}

FiberStencil FiberStencil::build(const TubeGrid& grid, bool flat) {
    FiberStencil s;
    s.dt = grid.dt();
    s.eps = grid.eps;
    const double kappa = flat ? 0.0 : grid.geometry.curvature;
    const double eps = grid.eps;
    auto hval = [&](double z1) { return 1.0 - kappa * eps * z1; };
    const std::size_t nf = grid.fiber_size();
    s.volume.resize(nf);
    s.h.resize(nf);
    s.boundary.assign(nf, 0.0);

    if (grid.m() == 1) {
        const double dz = grid.dz();
        for (std::size_t f = 0; f < nf; ++f) {
            s.volume[f] = dz;
            s.h[f] = hval(grid.z1(f));
        }
        for (std::size_t f = 0; f + 1 < nf; ++f) {
            const double zf = grid.z1(f) + 0.5 * dz;
            s.faces.push_back({f, f + 1, hval(zf) / dz});
        }
        s.boundary.front() = hval(-1.0 + 0.5 * dz) / dz;
        s.boundary.back() = hval(1.0 - 0.5 * dz) / dz;
        return s;
    }

    const std::size_t nr = grid.n1, nt = grid.n2;
    const double dr = grid.drho(), dth = grid.dtheta();
    auto id = [nt](std::size_t i, std::size_t j) { return i * nt + j; };
    for (std::size_t i = 0; i < nr; ++i) {
        const double rho = (static_cast<double>(i) + 0.5) * dr;
        for (std::size_t j = 0; j < nt; ++j) {
            const double th = dth * static_cast<double>(j);
            s.volume[id(i, j)] = rho * dr * dth;
            s.h[id(i, j)] = hval(rho * std::cos(th));
            // radial face outward at rho_f = (i + 1) dr
            const double rf = (static_cast<double>(i) + 1.0) * dr;
            const double crad = hval(rf * std::cos(th)) * rf * dth / dr;
            if (i + 1 < nr)
                s.faces.push_back({id(i, j), id(i + 1, j), crad});
            else
                s.boundary[id(i, j)] += crad;
            // angular face at theta_{j + 1/2}
            const double thf = th + 0.5 * dth;
            const double cang = hval(rho * std::cos(thf)) * dr / (rho * dth);
            s.faces.push_back({id(i, j), id(i, (j + 1) % nt), cang});
        }
    }
    return s;
}

void FiberStencil::apply_flux(const double* x, double* y) const {
    const std::size_t nf = volume.size();
    for (std::size_t f = 0; f < nf; ++f) y[f] = boundary[f] * x[f];
    for (const Face& fc : faces) {
        const double d = fc.coef * (x[fc.a] - x[fc.b]);
        y[fc.a] += d;
        y[fc.b] -= d;
    }
}

}  // namespace gelfand
