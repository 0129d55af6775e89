#include <cmath>

#include "gelfand/errors.hpp"
#include "gelfand/radial_core.hpp"

namespace gelfand {

namespace {

double log_cosh(double x) {
    x = std::abs(x);
    return x + std::log1p(std::exp(-2.0 * x)) - std::log(2.0);
}

template <class F>
double bisect(F&& f, double lo, double hi) {
    const bool neg_lo = f(lo) < 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if ((f(mid) < 0.0) == neg_lo)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double ClosedForm1d::profile(double alpha, double lambda, double r) {
    return 2.0 * std::log(alpha) - 2.0 * log_cosh(alpha * std::sqrt(0.5 * lambda) * r);
}

double lambda_c_1d() {
    // Tangency of alpha and cosh(alpha c): y tanh y = 1 with y = alpha c, lambda = 2 / sinh(y)^2.
    const double y = bisect([](double x) { return x * std::tanh(x) - 1.0; }, 1.0, 2.0);
    const double sh = std::sinh(y);
    return 2.0 / (sh * sh);
}

ClosedForm1d closed_form_1d(double lambda, double double_root_tol) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("closed_form_1d: lambda must be > 0");
    ClosedForm1d out;
    out.lambda = lambda;
    const double c = std::sqrt(0.5 * lambda);
    auto f = [c](double al) { return al - std::cosh(al * c); };
    const double peak = std::asinh(1.0 / c) / c;  // maximiser of f
    const double fpeak = f(peak);
    if (std::abs(fpeak) <= double_root_tol * peak) {
        out.alphas = {peak, peak};
        out.double_root = true;
        return out;
    }
    if (fpeak < 0.0) return out;  // lambda > lambda_c: no solution
    out.alphas.push_back(bisect(f, 1.0, peak));
    double hi = 2.0 * peak;
    while (f(hi) > 0.0) hi *= 2.0;
    out.alphas.push_back(bisect(f, peak, hi));
    return out;
}

double ClosedForm2d::profile(double b, double lambda, double r) {
    return std::log(b) - 2.0 * std::log1p(lambda * b * r * r / 8.0);
}

ClosedForm2d closed_form_2d(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("closed_form_2d: lambda must be > 0");
    if (lambda > 2.0) throw OutOfRange("closed_form_2d: no solution for lambda > 2");
    ClosedForm2d out;
    out.lambda = lambda;
    const double root = std::sqrt(1.0 - 0.5 * lambda);
    const double plus = 1.0 - 0.25 * lambda + root;
    out.b2 = 32.0 / (lambda * lambda) * plus;
    // (1 - lambda/4)^2 - (1 - lambda/2) = lambda^2 / 16, so the minus branch is 2 / plus.
    out.b1 = 2.0 / plus;
    return out;
}

RadialProfile closed_form_profile(int m, double lambda, int branch, const RadialGrid& grid) {
    validate(grid);
    if (branch != 1 && branch != 2) throw InvalidArgument("branch must be 1 or 2");
    RadialProfile p;
    p.m = m;
    p.lambda = lambda;
    p.grid = grid;
    const std::size_t n = grid.size();
    p.values.resize(n);
    p.derivatives.resize(n);
    if (m == 1) {
        const ClosedForm1d cf = closed_form_1d(lambda);
        if (cf.alphas.empty()) throw OutOfRange("closed_form_profile: lambda above lambda_c");
        const double alpha = cf.alphas[static_cast<std::size_t>(branch - 1)];
        const double k = alpha * std::sqrt(0.5 * lambda);
        for (std::size_t i = 0; i < n; ++i) {
            p.values[i] = ClosedForm1d::profile(alpha, lambda, grid.r[i]);
            p.derivatives[i] = -2.0 * k * std::tanh(k * grid.r[i]);
        }
    } else if (m == 2) {
        const ClosedForm2d cf = closed_form_2d(lambda);
        const double b = branch == 1 ? cf.b1 : cf.b2;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = grid.r[i];
            p.values[i] = ClosedForm2d::profile(b, lambda, r);
            p.derivatives[i] = -(lambda * b * r / 2.0) / (1.0 + lambda * b * r * r / 8.0);
        }
    } else {
        throw InvalidArgument("closed forms exist only for m = 1, 2");
    }
    p.a = p.values[0];
    p.values.back() = 0.0;
    p.residual = ode_residual(p);
    return p;
}

}  // namespace gelfand
