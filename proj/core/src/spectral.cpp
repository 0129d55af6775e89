#include "gelfand/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gelfand/errors.hpp"

namespace gelfand {

Potential potential_of(const RadialProfile& profile) {
    Potential p;
    p.grid = profile.grid;
    p.values.resize(profile.values.size());
    for (std::size_t i = 0; i < p.values.size(); ++i) p.values[i] = profile.lambda * std::exp(profile.values[i]);
    return p;
}

Potential zero_potential(const RadialGrid& grid) {
    return {grid, std::vector<double>(grid.size(), 0.0)};
}

std::size_t harmonic_multiplicity(int l, int m) {
    if (l < 0 || m < 1) throw InvalidArgument("harmonic_multiplicity: l >= 0, m >= 1");
    if (m == 1) return l <= 1 ? 1 : 0;
    if (l == 0) return 1;
    if (m == 2) return 2;
    // C(l+m-2, l) (2l+m-2) / (l+m-2), evaluated exactly in integers.
    std::size_t binom = 1;
    for (int j = 1; j <= l; ++j) binom = binom * static_cast<std::size_t>(m - 2 + j) / static_cast<std::size_t>(j);
    return binom * static_cast<std::size_t>(2 * l + m - 2) / static_cast<std::size_t>(l + m - 2);
}

RadialOperator::RadialOperator(int m, RadialGrid grid) : m_(m), grid_(std::move(grid)) {
    if (m < 1) throw InvalidArgument("dimension must be >= 1");
    validate(grid_);
    const auto& r = grid_.r;
    const std::size_t n = r.size() - 1;  // unknown nodes 0 .. n-1, node n is the boundary
    vol_.resize(n);
    flux_.resize(n);
    const double md = m;
    double lower = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double face = 0.5 * (r[i] + r[i + 1]);
        vol_[i] = (std::pow(face, md) - std::pow(lower, md)) / md;
        flux_[i] = std::pow(face, md - 1.0) / (r[i + 1] - r[i]);
        lower = face;
    }
}

std::size_t RadialOperator::unknowns(int l) const noexcept {
    return vol_.size() - first_unknown(l);
}

void RadialOperator::check(const Potential& potential) const {
    if (potential.values.size() != potential.grid.size())
        throw GridMismatch("potential values do not match their grid");
    if (!(potential.grid == grid_))
        throw GridMismatch("potential grid differs from the operator grid");
}

SymTridiagonal RadialOperator::stiffness(const Potential& potential, int l) const {
    check(potential);
    if (l < 0) throw InvalidArgument("angular momentum must be >= 0");
    if (m_ == 1 && l > 1) throw InvalidArgument("m = 1 has only l = 0 (even) and l = 1 (odd)");
    const std::size_t first = first_unknown(l);
    const std::size_t n = vol_.size();
    const double centrifugal = static_cast<double>(l) * (l + m_ - 2);
    SymTridiagonal a;
    a.diag.resize(n - first);
    a.off.resize(n - first - 1);
    for (std::size_t i = first; i < n; ++i) {
        const std::size_t k = i - first;
        double d = flux_[i];
        if (i > 0) d += flux_[i - 1];
        double shift = -potential.values[i];
        if (centrifugal != 0.0) shift += centrifugal / (grid_.r[i] * grid_.r[i]);
        a.diag[k] = d + vol_[i] * shift;
        if (i + 1 < n) a.off[k] = -flux_[i];
    }
    return a;
}

SymTridiagonal RadialOperator::symmetric(const Potential& potential, int l) const {
    SymTridiagonal a = stiffness(potential, l);
    const std::size_t first = first_unknown(l);
    for (std::size_t k = 0; k < a.diag.size(); ++k) a.diag[k] /= vol_[k + first];
    for (std::size_t k = 0; k < a.off.size(); ++k) a.off[k] /= std::sqrt(vol_[k + first] * vol_[k + first + 1]);
    return a;
}

std::vector<double> RadialOperator::to_nodes(std::span<const double> y, int l) const {
    const std::size_t first = first_unknown(l);
    std::vector<double> phi(grid_.size(), 0.0);
    for (std::size_t k = 0; k < y.size(); ++k) phi[k + first] = y[k] / std::sqrt(vol_[k + first]);
    return phi;
}

std::vector<double> radial_eigs(const RadialOperator& op, const Potential& potential, int l, std::size_t k) {
    if (k < 1) throw InvalidArgument("radial_eigs: k must be >= 1");
    return op.symmetric(potential, l).lowest(k);
}

std::vector<double> radial_eigs(int m, const Potential& potential, int l, std::size_t k) {
    return radial_eigs(RadialOperator(m, potential.grid), potential, l, k);
}

LinearizedSpectrum full_spectrum(int m, const Potential& potential, std::size_t count) {
    if (count < 1) throw InvalidArgument("full_spectrum: count must be >= 1");
    const RadialOperator op(m, potential.grid);
    LinearizedSpectrum s;
    s.m = m;
    s.count = count;

    auto rebuild = [&] {
        s.merged.clear();
        for (const auto& mode : s.modes)
            for (double e : mode.eigenvalues) s.merged.insert(s.merged.end(), mode.multiplicity, e);
        std::sort(s.merged.begin(), s.merged.end());
        if (s.merged.size() > count) s.merged.resize(count);
    };

    {
        const SymTridiagonal b = op.symmetric(potential, 0);
        s.modes.push_back({0, 1, b.lowest(count)});
        rebuild();
    }
    const int l_max = m == 1 ? 1 : std::numeric_limits<int>::max();
    for (int l = 1; l <= l_max; ++l) {
        const SymTridiagonal b = op.symmetric(potential, l);
        if (b.size() == 0) break;
        const double threshold = s.merged.size() < count ? std::numeric_limits<double>::infinity() : s.merged.back();
        const double lowest = b.eigenvalue(0);
        if (lowest > threshold) break;
        AngularMode mode{l, harmonic_multiplicity(l, m), {}};
        const std::size_t below = std::isinf(threshold) ? count : std::min(count, b.count_below(threshold) + 1);
        mode.eigenvalues = b.lowest(std::max<std::size_t>(1, below));
        while (!mode.eigenvalues.empty() && mode.eigenvalues.back() > threshold) mode.eigenvalues.pop_back();
        if (mode.eigenvalues.empty()) break;
        s.modes.push_back(std::move(mode));
        rebuild();
    }
    return s;
}

double mu1(int m, const Potential& potential) {
    return radial_eigs(m, potential, 0, 1).front();
}

double rayleigh_quotient(const RadialOperator& op, const Potential& potential, std::span<const double> phi) {
    op.check(potential);
    const auto& vol = op.volumes();
    const auto& flux = op.couplings();
    if (phi.size() != op.grid().size()) throw DimensionMismatch("rayleigh_quotient: phi size");
    double q = 0.0, nrm = 0.0;
    for (std::size_t i = 0; i < vol.size(); ++i) {
        const double diff = phi[i] - phi[i + 1];
        q += flux[i] * diff * diff - vol[i] * potential.values[i] * phi[i] * phi[i];
        nrm += vol[i] * phi[i] * phi[i];
    }
    return q / nrm;
}

RadialEigenpair first_eigenpair(int m, const Potential& potential) {
    const RadialOperator op(m, potential.grid);
    const SymTridiagonal b = op.symmetric(potential, 0);
    RadialEigenpair out;
    out.mu = b.eigenvalue(0);
    const std::vector<double> y = b.eigenvector(out.mu);
    out.phi = op.to_nodes(y, 0);
    if (out.phi[0] < 0.0)
        for (auto& v : out.phi) v = -v;
    out.rayleigh = rayleigh_quotient(op, potential, out.phi);
    return out;
}

std::size_t morse_index(int m, const Potential& potential) {
    const RadialOperator op(m, potential.grid);
    std::size_t index = 0;
    const int l_max = m == 1 ? 1 : std::numeric_limits<int>::max();
    for (int l = 0; l <= l_max; ++l) {
        const std::size_t neg = op.symmetric(potential, l).count_below(0.0);
        if (neg == 0) break;
        index += neg * harmonic_multiplicity(l, m);
    }
    return index;
}

SupersolutionProfile solve_supersolution(int m, const Potential& potential) {
    const RadialOperator op(m, potential.grid);
    const double mu = op.symmetric(potential, 0).eigenvalue(0);
    if (!(mu > 0.0))
        throw NotInvertible("solve_supersolution: mu1 = " + std::to_string(mu) + " <= 0, linearised operator not positive");
    const SymTridiagonal a = op.stiffness(potential, 0);
    const auto& vol = op.volumes();
    std::vector<double> w = a.solve(vol);

    SupersolutionProfile s;
    s.m = m;
    s.grid = potential.grid;
    s.values.assign(potential.grid.size(), 0.0);
    std::copy(w.begin(), w.end(), s.values.begin());

    const std::vector<double> aw = a.apply(w);
    double res = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        double scale = std::abs(a.diag[i] * w[i]) + vol[i];
        if (i > 0) scale += std::abs(a.off[i - 1] * w[i - 1]);
        if (i + 1 < w.size()) scale += std::abs(a.off[i] * w[i + 1]);
        res = std::max(res, std::abs(aw[i] - vol[i]) / scale);
    }
    s.residual = res;
    verify_W_bounds(s);
    return s;
}

double verify_W_bounds(SupersolutionProfile& profile) {
    const auto& r = profile.grid.r;
    const auto& w = profile.values;
    const std::size_t n = r.size();
    if (w.size() != n) throw DimensionMismatch("supersolution values do not match grid");

    double sup_w = 0.0, sup_g = 0.0, sup_l = 0.0;
    for (double v : w) sup_w = std::max(sup_w, std::abs(v));
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hm = r[i] - r[i - 1], hp = r[i + 1] - r[i];
        const double dp = (w[i + 1] - w[i]) / hp, dm = (w[i] - w[i - 1]) / hm;
        sup_g = std::max(sup_g, std::abs((hm * dp + hp * dm) / (hp + hm)));
    }
    {
        // second-order one-sided difference at r = 1
        const double h1 = r[n - 1] - r[n - 2], h2 = r[n - 2] - r[n - 3];
        const double d1 = (w[n - 1] - w[n - 2]) / h1, d2 = (w[n - 2] - w[n - 3]) / h2;
        sup_g = std::max(sup_g, std::abs(d1 + h1 * (d1 - d2) / (h1 + h2)));
    }
    const RadialOperator op(profile.m, profile.grid);
    const SymTridiagonal a0 = op.stiffness(zero_potential(profile.grid), 0);
    const std::vector<double> inner(w.begin(), w.end() - 1);
    const std::vector<double> lap = a0.apply(inner);
    for (std::size_t i = 0; i < lap.size(); ++i) sup_l = std::max(sup_l, std::abs(lap[i] / op.volumes()[i]));

    profile.sup_value = sup_w;
    profile.sup_gradient = sup_g;
    profile.sup_laplacian = sup_l;
    profile.bound = std::max({sup_w, sup_g, sup_l});
    return profile.bound;
}

}  // namespace gelfand
