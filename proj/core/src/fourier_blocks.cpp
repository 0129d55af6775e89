#include "fourier_blocks.hpp"

#include <cmath>
#include <numbers>

#include "gelfand/errors.hpp"

namespace gelfand::detail {

FourierBlocks::FourierBlocks(const FermiOperator& op)
    : op_(op), nf_(op.grid().fiber_size()), nt_(op.grid().n_t) {
    if (!op.t_invariant()) throw InvalidArgument("Fourier block decomposition needs a t-independent potential");
    const FiberStencil& fs = op.fiber();
    sigma_.resize(block_count());
    for (std::size_t q = 0; q < sigma_.size(); ++q)
        sigma_[q] = 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(q) / static_cast<double>(nt_));
    base_diag_ = fs.boundary;
    for (const auto& f : fs.faces) {
        base_diag_[f.a] += f.coef;
        base_diag_[f.b] += f.coef;
    }
    t_weight_.resize(nf_);
    mass_.resize(nf_);
    const auto& pot = op.fiber_potential();
    for (std::size_t f = 0; f < nf_; ++f) {
        mass_[f] = fs.volume[f] * fs.h[f];
        base_diag_[f] -= mass_[f] * pot[f];
        t_weight_[f] = fs.t_weight(f);
    }
    cos_.resize(nt_);
    sin_.resize(nt_);
    for (std::size_t j = 0; j < nt_; ++j) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(nt_);
        cos_[j] = std::cos(th);
        sin_[j] = std::sin(th);
    }
}

SymTridiagonal FourierBlocks::tridiagonal(std::size_t q) const {
    if (op_.grid().m() != 1) throw InvalidArgument("tridiagonal blocks exist for m = 1 only");
    SymTridiagonal t;
    t.diag.resize(nf_);
    t.off.assign(nf_ - 1, 0.0);
    for (std::size_t f = 0; f < nf_; ++f) t.diag[f] = base_diag_[f] + sigma_[q] * t_weight_[f];
    for (const auto& fc : op_.fiber().faces) t.off[std::min(fc.a, fc.b)] = -fc.coef;
    return t;
}

SymTridiagonal FourierBlocks::tridiagonal_symmetric(std::size_t q) const {
    SymTridiagonal t = tridiagonal(q);
    for (std::size_t f = 0; f < nf_; ++f) t.diag[f] /= mass_[f];
    for (std::size_t f = 0; f + 1 < nf_; ++f) t.off[f] /= std::sqrt(mass_[f] * mass_[f + 1]);
    return t;
}

Eigen::SparseMatrix<double> FourierBlocks::sparse(std::size_t q) const {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(nf_ + 2 * op_.fiber().faces.size());
    for (std::size_t f = 0; f < nf_; ++f) {
        const auto i = static_cast<Eigen::Index>(f);
        trip.emplace_back(i, i, base_diag_[f] + sigma_[q] * t_weight_[f]);
    }
    for (const auto& fc : op_.fiber().faces) {
        const auto a = static_cast<Eigen::Index>(fc.a), b = static_cast<Eigen::Index>(fc.b);
        trip.emplace_back(a, b, -fc.coef);
        trip.emplace_back(b, a, -fc.coef);
    }
    Eigen::SparseMatrix<double> k(static_cast<Eigen::Index>(nf_), static_cast<Eigen::Index>(nf_));
    k.setFromTriplets(trip.begin(), trip.end());
    return k;
}

Eigen::MatrixXd FourierBlocks::dense_symmetric(std::size_t q) const {
    Eigen::MatrixXd a = Eigen::MatrixXd(sparse(q));
    Eigen::VectorXd s(static_cast<Eigen::Index>(nf_));
    for (std::size_t f = 0; f < nf_; ++f) s(static_cast<Eigen::Index>(f)) = 1.0 / std::sqrt(mass_[f]);
    return s.asDiagonal() * a * s.asDiagonal();
}

void FourierBlocks::forward(std::span<const double> x, std::vector<std::vector<double>>& c,
                            std::vector<std::vector<double>>& s) const {
    const std::size_t nb = block_count();
    c.assign(nb, std::vector<double>(nf_, 0.0));
    s.assign(nb, std::vector<double>(nf_, 0.0));
    for (std::size_t q = 0; q < nb; ++q) {
        double* cq = c[q].data();
        double* sq = s[q].data();
        for (std::size_t j = 0; j < nt_; ++j) {
            const double cj = cos_at(q, j), sj = sin_at(q, j);
            const double* xj = x.data() + j * nf_;
            for (std::size_t f = 0; f < nf_; ++f) {
                cq[f] += cj * xj[f];
                sq[f] += sj * xj[f];
            }
        }
    }
}

void FourierBlocks::inverse(const std::vector<std::vector<double>>& c, const std::vector<std::vector<double>>& s,
                            std::span<double> x) const {
    const std::size_t nb = block_count();
    const double inv_n = 1.0 / static_cast<double>(nt_);
    for (std::size_t j = 0; j < nt_; ++j) {
        double* xj = x.data() + j * nf_;
        for (std::size_t f = 0; f < nf_; ++f) xj[f] = c[0][f];
        for (std::size_t q = 1; q < nb; ++q) {
            const double w = multiplicity(q);
            const double cj = w * cos_at(q, j), sj = w * sin_at(q, j);
            const double* cq = c[q].data();
            const double* sq = s[q].data();
            for (std::size_t f = 0; f < nf_; ++f) xj[f] += cj * cq[f] + sj * sq[f];
        }
        for (std::size_t f = 0; f < nf_; ++f) xj[f] *= inv_n;
    }
}

}  // namespace gelfand::detail
