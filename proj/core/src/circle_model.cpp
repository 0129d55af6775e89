#include "gelfand/circle_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gelfand/errors.hpp"

namespace gelfand {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double nu_of(std::size_t k, double length) {
    const double w = two_pi * static_cast<double>(k) / length;
    return w * w;
}

void check_length(double length) {
    if (!(length > 0.0) || !std::isfinite(length)) throw InvalidArgument("circle length must be positive");
}

}  // namespace

CircleGeometry CircleGeometry::circle(double radius, int fiber_dim) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("circle radius must be positive");
    if (fiber_dim < 1) throw InvalidArgument("fiber dimension must be >= 1");
    return {radius, 1.0 / radius, two_pi * radius, fiber_dim};
}

CircleGeometry CircleGeometry::flat(double length, int fiber_dim) {
    check_length(length);
    if (fiber_dim < 1) throw InvalidArgument("fiber dimension must be >= 1");
    return {std::numeric_limits<double>::infinity(), 0.0, length, fiber_dim};
}

void CircleGeometry::check_eps(double eps) const {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("eps must be positive");
    if (!(eps * curvature < 1.0))
        throw InvalidArgument("eps * curvature = " + std::to_string(eps * curvature) + " must be < 1");
}

std::vector<double> nu_eigenvalues(double length, std::size_t count) {
    check_length(length);
    std::vector<double> nu;
    nu.reserve(count);
    if (count > 0) nu.push_back(0.0);
    for (std::size_t k = 1; nu.size() < count; ++k) {
        nu.push_back(nu_of(k, length));
        if (nu.size() < count) nu.push_back(nu_of(k, length));
    }
    return nu;
}

ProductSpectrum product_spectrum(std::span<const double> mu, std::span<const double> nu, double eps) {
    if (!(eps > 0.0)) throw InvalidArgument("product_spectrum: eps must be positive");
    if (mu.empty() || nu.empty()) throw InvalidArgument("product_spectrum: empty input");
    ProductSpectrum s;
    s.mu.assign(mu.begin(), mu.end());
    s.nu.assign(nu.begin(), nu.end());
    s.eps = eps;
    s.combined.reserve(mu.size() * nu.size());
    const double e2 = eps * eps;
    for (double m : mu)
        for (double n : nu) s.combined.push_back(m + e2 * n);
    std::sort(s.combined.begin(), s.combined.end());
    return s;
}

std::vector<double> resonant_eps(double mu1, double length, double eps_max, double eps_min) {
    check_length(length);
    if (!(eps_max > 0.0)) throw InvalidArgument("resonant_eps: eps_max must be positive");
    if (!(eps_min > 0.0)) throw InvalidArgument("resonant_eps: eps_min must be positive (S accumulates at 0)");
    std::vector<double> out;
    if (!(mu1 < 0.0) || eps_min > eps_max) return out;
    // eps_k = sqrt(-mu1) length / (2 pi k)
    const double scale = std::sqrt(-mu1) * length / two_pi;
    const double k_lo = std::max(1.0, std::floor(scale / eps_max) - 1.0);
    const double k_hi = std::ceil(scale / eps_min) + 1.0;
    if (k_hi - k_lo > 5e7) throw InvalidArgument("resonant_eps: window too wide, raise eps_min");
    for (auto k = static_cast<std::size_t>(k_lo); static_cast<double>(k) <= k_hi; ++k) {
        const double e = std::sqrt(-mu1 / nu_of(k, length));
        if (e <= eps_max && e >= eps_min) out.push_back(e);
    }
    return out;  // k ascending means eps descending
}

std::vector<double> resonant_eps(std::span<const double> mu, double length, double eps_max, double eps_min) {
    std::vector<double> all;
    double last = std::numeric_limits<double>::quiet_NaN();
    for (double m : mu) {
        if (!(m < 0.0) || m == last) continue;  // repeated eigenvalues give identical sets
        last = m;
        const auto s = resonant_eps(m, length, eps_max, eps_min);
        all.insert(all.end(), s.begin(), s.end());
    }
    std::sort(all.begin(), all.end(), std::greater<>());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

SpectralGap spectral_gap(const ProductSpectrum& spectrum) {
    if (spectrum.combined.empty()) throw InvalidArgument("spectral_gap: empty spectrum");
    SpectralGap g;
    g.delta = std::numeric_limits<double>::infinity();
    for (double v : spectrum.combined) g.delta = std::min(g.delta, std::abs(v));

    const double mu1 = *std::min_element(spectrum.mu.begin(), spectrum.mu.end());
    if (!(mu1 < 0.0)) return g;
    const double e2 = spectrum.eps * spectrum.eps;
    const auto& nu = spectrum.nu;
    std::size_t k = 0;
    for (std::size_t j = 0; j < nu.size(); ++j)
        if (mu1 + e2 * nu[j] > 0.0) {
            k = j + 1;
            break;
        }
    if (k < 2) return g;  // no sign change inside the supplied nu list
    double gap = 0.0;
    for (std::size_t j = 1; j <= k && j < nu.size(); ++j) gap = std::max(gap, nu[j] - nu[j - 1]);
    g.has_bound = true;
    g.bound_index = k;
    g.bound = e2 * gap;
    g.bound_holds = g.delta <= g.bound;
    return g;
}

NonresonantSet nonresonant_set(int N, double eps, std::span<const double> mu, double length) {
    if (N < 2) throw InvalidArgument("nonresonant_set: N must be >= 2");
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("nonresonant_set: eps must lie in (0, 1)");
    NonresonantSet out;
    out.eps = eps;
    out.exponent = N;
    const double radius = std::pow(eps, N);
    const double lo = eps, hi = 2.0 * eps;
    std::vector<double> centres = resonant_eps(mu, length, hi + radius, std::max(lo - radius, 1e-300));
    std::sort(centres.begin(), centres.end());
    std::vector<std::pair<double, double>> cut;
    for (double s : centres) {
        const double a = std::max(lo, s - radius), b = std::min(hi, s + radius);
        if (a < b) {
            out.excluded_centres.push_back(s);
            if (!cut.empty() && a <= cut.back().second)
                cut.back().second = std::max(cut.back().second, b);
            else
                cut.emplace_back(a, b);
        }
    }
    double x = lo;
    for (const auto& [a, b] : cut) {
        if (a > x) out.intervals.emplace_back(x, a);
        x = std::max(x, b);
    }
    if (x < hi) out.intervals.emplace_back(x, hi);
    for (const auto& [a, b] : out.intervals) out.measure += b - a;
    out.deficiency = eps - out.measure;
    return out;
}

NonresonantSet nonresonant_set(int N, double eps, double mu1, double length) {
    const double mu[1] = {mu1};
    return nonresonant_set(N, eps, std::span<const double>(mu, 1), length);
}

std::size_t morse_index_estimate(std::span<const double> mu, double length, double eps) {
    check_length(length);
    if (!(eps > 0.0)) throw InvalidArgument("morse_index_estimate: eps must be positive");
    const double e2 = eps * eps;
    std::size_t count = 0;
    for (double m : mu) {
        if (!(m < 0.0)) continue;
        auto negative = [&](std::size_t k) { return m + e2 * nu_of(k, length) < 0.0; };
        auto k = static_cast<std::size_t>(std::floor(std::sqrt(-m) * length / (two_pi * eps)));
        while (negative(k + 1)) ++k;
        while (k > 0 && !negative(k)) --k;
        count += 1 + 2 * k;
    }
    return count;
}

std::size_t morse_index_estimate(std::span<const double> mu, std::span<const double> nu, double eps) {
    const double e2 = eps * eps;
    std::size_t count = 0;
    for (double m : mu)
        for (double n : nu)
            if (m + e2 * n < 0.0) ++count;
    return count;
}

std::vector<EigenvalueSlope> eigenvalue_slope(std::span<const double> mu, std::span<const double> nu, double eps,
                                              double d_eps, double alpha) {
    if (!(d_eps > 0.0) || !(d_eps < eps)) throw InvalidArgument("eigenvalue_slope: need 0 < d_eps < eps");
    std::vector<EigenvalueSlope> out;
    for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::size_t j = 0; j < nu.size(); ++j) {
            const double value = mu[i] + eps * eps * nu[j];
            if (!(value < alpha)) continue;
            const double up = mu[i] + (eps + d_eps) * (eps + d_eps) * nu[j];
            const double dn = mu[i] + (eps - d_eps) * (eps - d_eps) * nu[j];
            out.push_back({i, j, value, (up - dn) / (2.0 * d_eps), 2.0 * eps * nu[j]});
        }
    return out;
}

double power_law_exponent(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("power_law_exponent: need >= 2 pairs");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgument("power_law_exponent: values must be positive");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(x.size());
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw InvalidArgument("power_law_exponent: x values coincide");
    return (n * sxy - sx * sy) / den;
}

ResonanceReport resonance_report(std::span<const double> mu, double length, std::span<const double> eps_list, int N,
                                 double eps_min_resonant) {
    if (mu.empty()) throw InvalidArgument("resonance_report: empty fiber spectrum");
    ResonanceReport r;
    r.mu1 = mu.front();
    r.length = length;
    r.exponent = N;
    double eps_hi = 0.0;
    for (double e : eps_list) eps_hi = std::max(eps_hi, 2.0 * e);
    r.resonant = resonant_eps(mu, length, eps_hi, eps_min_resonant);
    for (double e : eps_list) {
        const double most_negative = std::min(0.0, mu.front());
        const auto kmax = static_cast<std::size_t>(std::ceil(std::sqrt(-most_negative) * length / (two_pi * e))) + 2;
        const std::vector<double> nu = nu_eigenvalues(length, 2 * kmax + 3);
        const SpectralGap gap = spectral_gap(product_spectrum(mu, nu, e));
        r.sweep.push_back({e, gap.delta, morse_index_estimate(mu, length, e)});
        r.nonresonant.push_back(nonresonant_set(N, e, mu, length));
    }
    return r;
}

}  // namespace gelfand
