#pragma once

// Fourier-in-t decomposition of a tube operator whose potential does not depend on t.
// The t-coupling is the periodic second difference, diagonalised by the real DFT:
// mode q sees the fiber matrix K_q = S + sigma_q T - diag(vol h V), sigma_q = 2 - 2 cos(2 pi q / N_t),
// T = diag(eps^2 vol / (h dt^2)). Cos and sin components of mode q share K_q.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstddef>
#include <span>
#include <vector>

#include "gelfand/fermi_operator.hpp"
#include "gelfand/tridiagonal.hpp"

namespace gelfand::detail {

class FourierBlocks {
public:
    explicit FourierBlocks(const FermiOperator& op);

    [[nodiscard]] std::size_t fiber_size() const noexcept { return nf_; }
    [[nodiscard]] std::size_t n_t() const noexcept { return nt_; }
    [[nodiscard]] std::size_t block_count() const noexcept { return nt_ / 2 + 1; }
    [[nodiscard]] std::size_t multiplicity(std::size_t q) const noexcept { return (q == 0 || 2 * q == nt_) ? 1 : 2; }
    [[nodiscard]] double sigma(std::size_t q) const noexcept { return sigma_[q]; }
    /// Fiber mass vol h (per unit dt).
    [[nodiscard]] const std::vector<double>& fiber_mass() const noexcept { return mass_; }

    /// K_q for m = 1 (tridiagonal), unscaled.
    [[nodiscard]] SymTridiagonal tridiagonal(std::size_t q) const;
    /// M^{-1/2} K_q M^{-1/2} for m = 1.
    [[nodiscard]] SymTridiagonal tridiagonal_symmetric(std::size_t q) const;
    [[nodiscard]] Eigen::SparseMatrix<double> sparse(std::size_t q) const;
    [[nodiscard]] Eigen::MatrixXd dense_symmetric(std::size_t q) const;

    /// Real DFT along t of a full-grid vector: coefficient arrays per mode (cos, sin).
    void forward(std::span<const double> x, std::vector<std::vector<double>>& c, std::vector<std::vector<double>>& s) const;
    /// Inverse of `forward`.
    void inverse(const std::vector<std::vector<double>>& c, const std::vector<std::vector<double>>& s,
                 std::span<double> x) const;

    /// cos(2 pi q j / N_t) and sin(...) tables.
    [[nodiscard]] double cos_at(std::size_t q, std::size_t j) const noexcept { return cos_[(q * j) % nt_]; }
    [[nodiscard]] double sin_at(std::size_t q, std::size_t j) const noexcept { return sin_[(q * j) % nt_]; }

private:
    const FermiOperator& op_;
    std::size_t nf_;
    std::size_t nt_;
    std::vector<double> sigma_;
    std::vector<double> base_diag_;  // S diagonal - vol h V
    std::vector<double> t_weight_;
    std::vector<double> mass_;
    std::vector<double> cos_, sin_;
};

}  // namespace gelfand::detail
