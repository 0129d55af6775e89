#pragma once

#include <cstddef>
#include <vector>

#include "gelfand/circle_model.hpp"

namespace gelfand {

/// Periodic t-grid times a fiber grid, fiber coordinates scaled by 1/eps (|z| <= 1).
///   m = 1: z in [-1, 1] with n1 intervals; interior nodes i = 1 .. n1-1 are unknowns.
///   m = 2: polar grid, rho_i = (i - 1/2) drho for i = 1 .. n1 with drho = 1 / (n1 + 1/2),
///          theta_j = j dtheta for j = 0 .. n2-1. The boundary ring sits at rho = 1; the pole is
///          not a node (its value is the ring-1 average when needed).
/// Unknowns are ordered t-major: index = jt * fiber_size() + f.
struct TubeGrid {
    CircleGeometry geometry;
    double eps = 0.1;
    std::size_t n_t = 128;
    std::size_t n1 = 256;
    std::size_t n2 = 1;

    static TubeGrid make(const CircleGeometry& geometry, double eps, std::size_t n_t, std::size_t n1, std::size_t n2 = 0);
    /// m = 1: N_t = 128, 256 intervals. m = 2: N_t = 64, 24 x 32 polar cells.
    static TubeGrid defaults(const CircleGeometry& geometry, double eps);
    /// Smallest power of two N_t with at least `per_mode` points per period of the highest
    /// negative t-mode sqrt(-mu_min) length / (2 pi eps); 16 when mu_min >= 0.
    static std::size_t resolving_nt(const CircleGeometry& geometry, double eps, double mu_min, double per_mode = 25.0);

    [[nodiscard]] int m() const noexcept { return geometry.fiber_dim; }
    [[nodiscard]] std::size_t fiber_size() const noexcept { return m() == 1 ? n1 - 1 : n1 * n2; }
    [[nodiscard]] std::size_t size() const noexcept { return n_t * fiber_size(); }
    [[nodiscard]] double dt() const noexcept { return geometry.length / static_cast<double>(n_t); }
    [[nodiscard]] double t(std::size_t jt) const noexcept { return dt() * static_cast<double>(jt); }

    /// Scaled fiber coordinates of unknown f (z2 = 0 for m = 1).
    [[nodiscard]] double z1(std::size_t f) const noexcept;
    [[nodiscard]] double z2(std::size_t f) const noexcept;
    [[nodiscard]] double radius(std::size_t f) const noexcept;

    [[nodiscard]] double dz() const noexcept { return 2.0 / static_cast<double>(n1); }
    [[nodiscard]] double drho() const noexcept { return 1.0 / (static_cast<double>(n1) + 0.5); }
    [[nodiscard]] double dtheta() const noexcept;
};

/// Scalar field on the unknowns of a TubeGrid; Dirichlet boundary values are implicit zeros.
struct TubeField {
    TubeGrid grid;
    std::vector<double> values;

    static TubeField zeros(const TubeGrid& grid);
    [[nodiscard]] double& at(std::size_t jt, std::size_t f) { return values[jt * grid.fiber_size() + f]; }
    [[nodiscard]] double at(std::size_t jt, std::size_t f) const { return values[jt * grid.fiber_size() + f]; }
    [[nodiscard]] double sup_norm() const;
    /// max over fiber nodes of (max_t - min_t); 0 for t-independent fields.
    [[nodiscard]] double t_variation() const;
};

/// Face-based finite-volume data of one fiber cross-section for a given eps.
/// Flux coefficients include the volume factor h evaluated on the face.
struct FiberStencil {
    struct Face {
        std::size_t a = 0;
        std::size_t b = 0;
        double coef = 0.0;
    };
    std::vector<double> volume;    // fiber cell measure (dvol of the product metric)
    std::vector<double> h;         // 1 - kappa eps z1 at the node
    std::vector<double> boundary;  // coefficient of faces towards the Dirichlet boundary
    std::vector<Face> faces;       // interior faces
    double dt = 0.0;
    double eps = 0.0;

    /// `flat` evaluates h = 1 everywhere (product metric) on the same grid.
    static FiberStencil build(const TubeGrid& grid, bool flat = false);

    [[nodiscard]] std::size_t size() const noexcept { return volume.size(); }
    /// Weight of the second difference in t: eps^2 vol / (h dt^2).
    [[nodiscard]] double t_weight(std::size_t f) const noexcept { return eps * eps * volume[f] / (h[f] * dt * dt); }
    /// S x: fiber flux part -div(h grad x) integrated over cells.
    void apply_flux(const double* x, double* y) const;
};

}  // namespace gelfand
