#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gelfand/radial_core.hpp"
#include "gelfand/radial_grid.hpp"
#include "gelfand/tridiagonal.hpp"

namespace gelfand {

/// Potential lambda e^U sampled at the nodes of a radial grid.
struct Potential {
    RadialGrid grid;
    std::vector<double> values;
};

Potential potential_of(const RadialProfile& profile);
Potential zero_potential(const RadialGrid& grid);

/// Dimension of degree-l spherical harmonics on S^{m-1}. For m = 1 the "modes" are the
/// even (l = 0) and odd (l = 1) functions, each with multiplicity 1, and l >= 2 gives 0.
std::size_t harmonic_multiplicity(int l, int m);

/// Conservative finite-volume discretisation of -(d_rr + (m-1)/r d_r - l(l+m-2)/r^2 + V)
/// on a monotone grid, Dirichlet at r = 1. For l = 0 the centre node is an unknown with
/// zero flux through r = 0; for l >= 1 the centre value is pinned to 0.
class RadialOperator {
public:
    RadialOperator(int m, RadialGrid grid);

    [[nodiscard]] int dim() const noexcept { return m_; }
    [[nodiscard]] const RadialGrid& grid() const noexcept { return grid_; }
    /// Control volumes of nodes 0 .. N-1 (shell measure r^{m-1} dr, no sphere area).
    [[nodiscard]] const std::vector<double>& volumes() const noexcept { return vol_; }
    /// Flux coefficient between node i and i+1, i = 0 .. N-1.
    [[nodiscard]] const std::vector<double>& couplings() const noexcept { return flux_; }

    [[nodiscard]] std::size_t first_unknown(int l) const noexcept { return l == 0 ? 0 : 1; }
    [[nodiscard]] std::size_t unknowns(int l) const noexcept;

    /// Stiffness matrix A (unscaled): A phi = mu Vol phi is the eigenproblem.
    [[nodiscard]] SymTridiagonal stiffness(const Potential& potential, int l) const;
    /// Vol^{-1/2} A Vol^{-1/2}; same spectrum as the generalised problem.
    [[nodiscard]] SymTridiagonal symmetric(const Potential& potential, int l) const;

    /// Maps a vector of unknowns (symmetric scaling) back to nodal values on the full grid.
    [[nodiscard]] std::vector<double> to_nodes(std::span<const double> y, int l) const;

    /// Throws GridMismatch if the potential lives on another grid.
    void check(const Potential& potential) const;

private:
    int m_;
    RadialGrid grid_;
    std::vector<double> vol_;
    std::vector<double> flux_;
};

std::vector<double> radial_eigs(const RadialOperator& op, const Potential& potential, int l, std::size_t k);
std::vector<double> radial_eigs(int m, const Potential& potential, int l, std::size_t k);

struct AngularMode {
    int l = 0;
    std::size_t multiplicity = 1;
    std::vector<double> eigenvalues;
};

struct LinearizedSpectrum {
    int m = 1;
    std::size_t count = 0;
    std::vector<AngularMode> modes;
    std::vector<double> merged;  // lowest `count` values, repeated by multiplicity
};

LinearizedSpectrum full_spectrum(int m, const Potential& potential, std::size_t count);

double mu1(int m, const Potential& potential);

struct RadialEigenpair {
    double mu = 0.0;
    std::vector<double> phi;  // nodal values incl. phi(1) = 0, sum Vol phi^2 = 1, phi(0) > 0
    double rayleigh = 0.0;    // Q(phi) / ||phi||^2 from the discrete quadratic form
};

RadialEigenpair first_eigenpair(int m, const Potential& potential);

/// Discrete Q(phi)/||phi||^2 for the l = 0 operator.
double rayleigh_quotient(const RadialOperator& op, const Potential& potential, std::span<const double> phi);

/// Negative eigenvalues of the linearised operator counted with harmonic multiplicity.
std::size_t morse_index(int m, const Potential& potential);

struct SupersolutionProfile {
    int m = 1;
    RadialGrid grid;
    std::vector<double> values;
    double residual = 0.0;  // normwise backward error of the tridiagonal solve
    double sup_value = 0.0;
    double sup_gradient = 0.0;
    double sup_laplacian = 0.0;
    double bound = 0.0;  // max of the three sups
};

/// -(Delta + potential) W = 1, W(1) = 0. Throws NotInvertible when mu1 <= 0.
SupersolutionProfile solve_supersolution(int m, const Potential& potential);

/// Recomputes the three sups (centred differences for W', the zero-potential discrete
/// operator for Delta W), stores them in `profile` and returns their maximum.
double verify_W_bounds(SupersolutionProfile& profile);

}  // namespace gelfand
