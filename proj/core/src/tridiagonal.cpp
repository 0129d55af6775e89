#include "gelfand/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gelfand/errors.hpp"

namespace gelfand {

std::size_t SymTridiagonal::count_below(double x) const {
    const std::size_t n = diag.size();
    std::size_t count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double b2 = i == 0 ? 0.0 : off[i - 1] * off[i - 1];
        q = diag[i] - x - (i == 0 ? 0.0 : b2 / q);
        if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::abs(diag[i]) + std::abs(x) + 1.0);
        if (q < 0.0) ++count;
    }
    return count;
}

std::pair<double, double> SymTridiagonal::gershgorin() const {
    const std::size_t n = diag.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        double rad = 0.0;
        if (i > 0) rad += std::abs(off[i - 1]);
        if (i + 1 < n) rad += std::abs(off[i]);
        lo = std::min(lo, diag[i] - rad);
        hi = std::max(hi, diag[i] + rad);
    }
    return {lo, hi};
}

double SymTridiagonal::eigenvalue(std::size_t k, double tol) const {
    if (k >= diag.size()) throw OutOfRange("eigenvalue index beyond matrix size");
    auto [lo, hi] = gershgorin();
    const double pad = 1e-12 * (std::abs(lo) + std::abs(hi) + 1.0);
    lo -= pad;
    hi += pad;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (count_below(mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> SymTridiagonal::lowest(std::size_t count, double tol) const {
    count = std::min(count, diag.size());
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = eigenvalue(k, tol);
    return out;
}

std::vector<double> SymTridiagonal::apply(std::span<const double> x) const {
    const std::size_t n = diag.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = diag[i] * x[i];
        if (i > 0) s += off[i - 1] * x[i - 1];
        if (i + 1 < n) s += off[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

std::vector<double> SymTridiagonal::solve(std::span<const double> b, double shift) const {
    // Gaussian elimination with partial pivoting on a tridiagonal band (one extra
    // super-diagonal appears after row swaps).
    const std::size_t n = diag.size();
    if (b.size() != n) throw DimensionMismatch("tridiagonal solve: rhs size");
    std::vector<double> lower(n, 0.0), d(n), u1(n, 0.0), u2(n, 0.0), x(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = diag[i] - shift;
        if (i + 1 < n) {
            u1[i] = off[i];
            lower[i + 1] = off[i];
        }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(lower[i + 1]) > std::abs(d[i])) {
            std::swap(d[i], lower[i + 1]);
            std::swap(u1[i], d[i + 1]);
            std::swap(u2[i], u1[i + 1]);
            std::swap(x[i], x[i + 1]);
        }
        if (d[i] == 0.0) throw NotInvertible("tridiagonal solve: singular matrix");
        const double f = lower[i + 1] / d[i];
        d[i + 1] -= f * u1[i];
        u1[i + 1] -= f * u2[i];
        x[i + 1] -= f * x[i];
    }
    if (d[n - 1] == 0.0) throw NotInvertible("tridiagonal solve: singular matrix");
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        if (ii + 1 < n) s -= u1[ii] * x[ii + 1];
        if (ii + 2 < n) s -= u2[ii] * x[ii + 2];
        x[ii] = s / d[ii];
    }
    return x;
}

std::vector<double> SymTridiagonal::eigenvector(double eigenvalue) const {
    const std::size_t n = diag.size();
    auto [lo, hi] = gershgorin();
    // Perturb the shift slightly so the shifted matrix is numerically invertible.
    const double shift = eigenvalue + 1e-13 * std::max(1.0, hi - lo);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> dist(0.5, 1.5);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    for (int it = 0; it < 4; ++it) {
        std::vector<double> w;
        try {
            w = solve(v, shift);
        } catch (const NotInvertible&) {
            w = solve(v, shift + 1e-10 * std::max(1.0, hi - lo));
        }
        double nrm = 0.0;
        for (double x : w) nrm += x * x;
        nrm = std::sqrt(nrm);
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nrm;
    }
    // Fix the sign so the largest component is positive.
    std::size_t imax = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
    if (v[imax] < 0.0)
        for (auto& x : v) x = -x;
    return v;
}

TridiagonalLdl::TridiagonalLdl(const SymTridiagonal& t) : d_(t.size()), l_(t.size(), 0.0) {
    const std::size_t n = t.size();
    min_abs_pivot_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double di = t.diag[i];
        if (i > 0) {
            l_[i] = t.off[i - 1] / d_[i - 1];
            di -= l_[i] * t.off[i - 1];
        }
        if (di == 0.0) throw NotInvertible("LDL^T: zero pivot");
        d_[i] = di;
        if (di < 0.0) ++negatives_;
        min_abs_pivot_ = std::min(min_abs_pivot_, std::abs(di));
    }
}

void TridiagonalLdl::solve_in_place(std::span<double> x) const {
    const std::size_t n = d_.size();
    for (std::size_t i = 1; i < n; ++i) x[i] -= l_[i] * x[i - 1];
    for (std::size_t i = 0; i < n; ++i) x[i] /= d_[i];
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= l_[i + 1] * x[i + 1];
}

}  // namespace gelfand
