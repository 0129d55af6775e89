#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gelfand {

/// Symmetric tridiagonal matrix: diag[0..n), off[0..n-1) with off[i] = T(i, i+1).
struct SymTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;

    [[nodiscard]] std::size_t size() const noexcept { return diag.size(); }

    /// Number of eigenvalues strictly below x (LDL^T pivot signs of T - x).
    [[nodiscard]] std::size_t count_below(double x) const;

    /// Gershgorin enclosure of the spectrum.
    [[nodiscard]] std::pair<double, double> gershgorin() const;

    /// Eigenvalue number k (0-based, ascending) by bisection to absolute tolerance `tol`.
    [[nodiscard]] double eigenvalue(std::size_t k, double tol = 1e-9) const;

    /// The `count` smallest eigenvalues, ascending.
    [[nodiscard]] std::vector<double> lowest(std::size_t count, double tol = 1e-9) const;

    /// Unit eigenvector for an (accurate) eigenvalue, by inverse iteration.
    [[nodiscard]] std::vector<double> eigenvector(double eigenvalue) const;

    /// y = T x
    [[nodiscard]] std::vector<double> apply(std::span<const double> x) const;

    /// Solve (T - shift I) x = b with partial pivoting. Throws NotInvertible on an exact zero pivot.
    [[nodiscard]] std::vector<double> solve(std::span<const double> b, double shift = 0.0) const;
};

/// LDL^T factorisation of a symmetric tridiagonal matrix, reusable for many right-hand sides.
/// Only valid when no pivot vanishes; positive definite input is the intended use.
class TridiagonalLdl {
public:
    explicit TridiagonalLdl(const SymTridiagonal& t);
    void solve_in_place(std::span<double> x) const;
    [[nodiscard]] std::size_t negative_pivots() const noexcept { return negatives_; }
    [[nodiscard]] double min_abs_pivot() const noexcept { return min_abs_pivot_; }

private:
    std::vector<double> d_;
    std::vector<double> l_;
    std::size_t negatives_ = 0;
    double min_abs_pivot_ = 0.0;
};

}  // namespace gelfand
