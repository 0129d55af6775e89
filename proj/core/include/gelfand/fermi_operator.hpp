#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gelfand/radial_core.hpp"
#include "gelfand/tube_grid.hpp"

namespace gelfand {

struct Triplet {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
};

/// L phi = -(eps^2 Delta phi + V phi) on the tube, V = lambda e^{base}, with the exact
/// scaled Laplacian of the circle tube,
///   eps^2 Delta = h^{-1} [ eps^2 d_t (h^{-1} d_t) + div_z (h grad_z) ],  h = 1 - kappa eps z1.
/// Discretised in the symmetric weighted form K = M L with M = dt vol h (lumped mass);
/// K is symmetric, so L is self-adjoint in <a, b>_h = sum M a b.
class FermiOperator {
public:
    /// Potential lambda e^{base} per unknown.
    FermiOperator(const TubeField& base, double lambda);
    /// Arbitrary per-node potential V.
    static FermiOperator with_potential(const TubeGrid& grid, std::vector<double> potential);
    /// `flat_metric` replaces h by 1 (product metric, same grid): the separable comparison operator.
    [[nodiscard]] FermiOperator product_metric() const;

    [[nodiscard]] const TubeGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] const FiberStencil& fiber() const noexcept { return fiber_; }
    [[nodiscard]] const std::vector<double>& potential() const noexcept { return potential_; }
    [[nodiscard]] double lambda() const noexcept { return lambda_; }
    [[nodiscard]] std::size_t size() const noexcept { return grid_.size(); }

    /// True when the potential does not depend on t (checked to rounding), which makes
    /// the operator block-diagonal in the Fourier modes of t.
    [[nodiscard]] bool t_invariant() const noexcept { return t_invariant_; }
    /// Potential on one fiber (t-average).
    [[nodiscard]] const std::vector<double>& fiber_potential() const noexcept { return fiber_potential_; }

    /// Fiber eigenvalues mu_i (with multiplicity) of the radial base, used as the
    /// product-model resonance estimate by the linear solvers.
    void set_product_model(std::vector<double> mu) { product_mu_ = std::move(mu); }
    [[nodiscard]] const std::optional<std::vector<double>>& product_model() const noexcept { return product_mu_; }

    /// L phi
    [[nodiscard]] std::vector<double> apply(std::span<const double> phi) const;
    /// K phi = M L phi
    [[nodiscard]] std::vector<double> apply_weighted(std::span<const double> phi) const;
    /// eps^2 Delta u (no potential)
    [[nodiscard]] std::vector<double> laplacian(std::span<const double> u) const;
    /// Lumped mass M (dt vol h)
    [[nodiscard]] const std::vector<double>& mass() const noexcept { return mass_; }
    [[nodiscard]] double inner(std::span<const double> a, std::span<const double> b) const;
    /// Nonzeros of K.
    [[nodiscard]] std::vector<Triplet> assemble() const;
    /// Diagonal of K.
    [[nodiscard]] std::vector<double> diagonal() const;

private:
    FermiOperator(const TubeGrid& grid, std::vector<double> potential, double lambda, bool flat);
    void apply_k(std::span<const double> phi, std::span<double> out, bool with_potential) const;

    TubeGrid grid_;
    FiberStencil fiber_;
    std::vector<double> potential_;
    std::vector<double> fiber_potential_;
    std::vector<double> mass_;
    double lambda_ = 0.0;
    bool flat_ = false;
    bool t_invariant_ = false;
    std::optional<std::vector<double>> product_mu_;
};

/// u_eps(t, z) = U(|z|) on the tube grid, cubic Hermite interpolation of the radial profile.
TubeField build_u_eps(const RadialProfile& profile, const TubeGrid& grid);

/// Operator linearised at u_eps(profile) with the fiber spectrum of the profile attached.
FermiOperator linearized_operator(const RadialProfile& profile, const TubeGrid& grid);

}  // namespace gelfand
