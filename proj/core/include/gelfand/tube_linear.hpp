#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "gelfand/fermi_operator.hpp"

namespace gelfand {

enum class LinearMethod {
    Automatic,     // Fourier blocks for t-independent potentials, else PCG with SparseLU fallback
    FourierBlock,  // exact per-wavenumber fiber solves
    Pcg,           // Jacobi-preconditioned CG on K (needs a positive operator)
    SparseLu       // direct factorisation of the assembled K
};

const char* to_string(LinearMethod method) noexcept;

struct LinearOptions {
    LinearMethod method = LinearMethod::Automatic;
    double tol = 1e-10;                 // relative residual target
    double accept_residual = 1e-8;      // NearSingular if the final residual is worse
    std::size_t max_iterations = 20000; // PCG
    double gap_tol = 1e-8;              // NearSingular below this spectral gap
};

struct LinearSolveReport {
    std::vector<double> solution;
    LinearMethod method = LinearMethod::Automatic;
    std::size_t iterations = 0;
    double relative_residual = 0.0;
    double product_gap = std::numeric_limits<double>::infinity();   // min |mu_i + eps^2 nu_j|, continuous nu
    double discrete_gap = std::numeric_limits<double>::infinity();  // min |eigenvalue| of the discrete operator (block path)
};

/// min over mu_i and k >= 0 of |mu_i + eps^2 (2 pi k / length)^2|.
double product_model_gap(std::span<const double> mu, double length, double eps);

/// Prepared inverse of L for one operator; reusable across right-hand sides.
/// Construction throws NearSingular when the operator sits on or next to a resonance.
class LinearizedInverse {
public:
    explicit LinearizedInverse(const FermiOperator& op, LinearOptions opts = {});
    ~LinearizedInverse();
    LinearizedInverse(LinearizedInverse&&) noexcept;
    LinearizedInverse& operator=(LinearizedInverse&&) noexcept;

    /// phi with L phi = f.
    [[nodiscard]] std::vector<double> solve(std::span<const double> f, LinearSolveReport* report = nullptr) const;

    [[nodiscard]] LinearMethod method() const noexcept;
    [[nodiscard]] double product_gap() const noexcept;
    [[nodiscard]] double discrete_gap() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

LinearSolveReport invert_L(const FermiOperator& op, const TubeField& f, const LinearOptions& opts = {});

}  // namespace gelfand
