#include "gelfand/fermi_operator.hpp"

#include <algorithm>
#include <cmath>

#include "gelfand/errors.hpp"
#include "gelfand/spectral.hpp"

namespace gelfand {

FermiOperator::FermiOperator(const TubeGrid& grid, std::vector<double> potential, double lambda, bool flat)
    : grid_(grid), fiber_(FiberStencil::build(grid, flat)), potential_(std::move(potential)), lambda_(lambda), flat_(flat) {
    if (potential_.size() != grid_.size()) throw DimensionMismatch("potential size does not match tube grid");
    const std::size_t nf = grid_.fiber_size();
    fiber_potential_.assign(nf, 0.0);
    double var = 0.0, scale = 0.0;
    for (std::size_t f = 0; f < nf; ++f) {
        double lo = potential_[f], hi = potential_[f], sum = 0.0;
        for (std::size_t jt = 0; jt < grid_.n_t; ++jt) {
            const double v = potential_[jt * nf + f];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
        }
        fiber_potential_[f] = sum / static_cast<double>(grid_.n_t);
        var = std::max(var, hi - lo);
        scale = std::max(scale, std::abs(hi));
    }
    t_invariant_ = var <= 1e-13 * (1.0 + scale);
    if (var == 0.0) std::copy(potential_.begin(), potential_.begin() + static_cast<std::ptrdiff_t>(nf), fiber_potential_.begin());
    mass_.resize(grid_.size());
    for (std::size_t jt = 0; jt < grid_.n_t; ++jt)
        for (std::size_t f = 0; f < nf; ++f) mass_[jt * nf + f] = fiber_.dt * fiber_.volume[f] * fiber_.h[f];
}

FermiOperator::FermiOperator(const TubeField& base, double lambda)
    : FermiOperator(base.grid, [&] {
          std::vector<double> p(base.values.size());
          for (std::size_t i = 0; i < p.size(); ++i) p[i] = lambda * std::exp(base.values[i]);
          return p;
      }(), lambda, false) {}

FermiOperator FermiOperator::with_potential(const TubeGrid& grid, std::vector<double> potential) {
    return FermiOperator(grid, std::move(potential), 0.0, false);
}

FermiOperator FermiOperator::product_metric() const {
    FermiOperator op(grid_, potential_, lambda_, true);
    op.product_mu_ = product_mu_;
    return op;
}

void FermiOperator::apply_k(std::span<const double> phi, std::span<double> out, bool with_potential) const {
    if (phi.size() != size() || out.size() != size()) throw DimensionMismatch("tube operator: vector size");
    const std::size_t nf = grid_.fiber_size(), nt = grid_.n_t;
    const double dt = fiber_.dt;
    for (std::size_t jt = 0; jt < nt; ++jt) {
        const double* x = phi.data() + jt * nf;
        double* y = out.data() + jt * nf;
        fiber_.apply_flux(x, y);
        const double* xm = phi.data() + ((jt + nt - 1) % nt) * nf;
        const double* xp = phi.data() + ((jt + 1) % nt) * nf;
        for (std::size_t f = 0; f < nf; ++f) {
            double v = dt * y[f] + dt * fiber_.t_weight(f) * (2.0 * x[f] - xm[f] - xp[f]);
            if (with_potential) v -= mass_[jt * nf + f] * potential_[jt * nf + f] * x[f];
            y[f] = v;
        }
    }
}

std::vector<double> FermiOperator::apply_weighted(std::span<const double> phi) const {
    std::vector<double> out(size());
    apply_k(phi, out, true);
    return out;
}

std::vector<double> FermiOperator::apply(std::span<const double> phi) const {
    std::vector<double> out = apply_weighted(phi);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] /= mass_[i];
    return out;
}

std::vector<double> FermiOperator::laplacian(std::span<const double> u) const {
    std::vector<double> out(size());
    apply_k(u, out, false);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = -out[i] / mass_[i];
    return out;
}

double FermiOperator::inner(std::span<const double> a, std::span<const double> b) const {
    double s = 0.0;
    for (std::size_t i = 0; i < mass_.size(); ++i) s += mass_[i] * a[i] * b[i];
    return s;
}

std::vector<double> FermiOperator::diagonal() const {
    const std::size_t nf = grid_.fiber_size(), nt = grid_.n_t;
    std::vector<double> fd(fiber_.boundary);
    for (const auto& fc : fiber_.faces) {
        fd[fc.a] += fc.coef;
        fd[fc.b] += fc.coef;
    }
    std::vector<double> d(size());
    for (std::size_t jt = 0; jt < nt; ++jt)
        for (std::size_t f = 0; f < nf; ++f) {
            const std::size_t i = jt * nf + f;
            d[i] = fiber_.dt * (fd[f] + 2.0 * fiber_.t_weight(f)) - mass_[i] * potential_[i];
        }
    return d;
}

std::vector<Triplet> FermiOperator::assemble() const {
    const std::size_t nf = grid_.fiber_size(), nt = grid_.n_t;
    const double dt = fiber_.dt;
    const std::vector<double> d = diagonal();
    std::vector<Triplet> out;
    out.reserve(size() * 7);
    for (std::size_t jt = 0; jt < nt; ++jt) {
        const std::size_t base = jt * nf;
        for (std::size_t f = 0; f < nf; ++f) out.push_back({base + f, base + f, d[base + f]});
        for (const auto& fc : fiber_.faces) {
            out.push_back({base + fc.a, base + fc.b, -dt * fc.coef});
            out.push_back({base + fc.b, base + fc.a, -dt * fc.coef});
        }
        const std::size_t next = ((jt + 1) % nt) * nf;
        for (std::size_t f = 0; f < nf; ++f) {
            const double w = -dt * fiber_.t_weight(f);
            out.push_back({base + f, next + f, w});
            out.push_back({next + f, base + f, w});
        }
    }
    return out;
}

TubeField build_u_eps(const RadialProfile& profile, const TubeGrid& grid) {
    if (profile.m != grid.m())
        throw DimensionMismatch("profile dimension " + std::to_string(profile.m) + " does not match fiber dimension " +
                                std::to_string(grid.m()));
    TubeField u = TubeField::zeros(grid);
    const std::size_t nf = grid.fiber_size();
    std::vector<double> fiber(nf);
    for (std::size_t f = 0; f < nf; ++f) fiber[f] = profile.value_at(grid.radius(f));
    for (std::size_t jt = 0; jt < grid.n_t; ++jt) std::copy(fiber.begin(), fiber.end(), u.values.begin() + static_cast<std::ptrdiff_t>(jt * nf));
    return u;
}

FermiOperator linearized_operator(const RadialProfile& profile, const TubeGrid& grid) {
    FermiOperator op(build_u_eps(profile, grid), profile.lambda);
    op.set_product_model(full_spectrum(profile.m, potential_of(profile), 8).merged);
    return op;
}

}  // namespace gelfand
