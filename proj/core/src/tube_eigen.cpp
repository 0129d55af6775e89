#include "gelfand/tube_eigen.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "fourier_blocks.hpp"
#include "gelfand/errors.hpp"

namespace gelfand {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

struct BlockPair {
    double value;
    std::size_t q;
    std::vector<double> fiber;  // M-orthonormal on one fiber (unit dt)
};

// Lowest `count` eigenpairs of block q; fiber vectors normalised with sum vol h phi^2 = 1.
std::vector<BlockPair> block_pairs(const detail::FourierBlocks& blocks, int m, std::size_t q, std::size_t count) {
    const std::size_t nf = blocks.fiber_size();
    const auto& mass = blocks.fiber_mass();
    std::vector<BlockPair> out;
    count = std::min(count, nf);
    if (m == 1) {
        const SymTridiagonal b = blocks.tridiagonal_symmetric(q);
        for (std::size_t k = 0; k < count; ++k) {
            const double v = b.eigenvalue(k, 1e-12);
            std::vector<double> y = b.eigenvector(v);
            for (std::size_t f = 0; f < nf; ++f) y[f] /= std::sqrt(mass[f]);
            out.push_back({v, q, std::move(y)});
        }
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blocks.dense_symmetric(q));
    for (std::size_t k = 0; k < count; ++k) {
        std::vector<double> y(nf);
        for (std::size_t f = 0; f < nf; ++f)
            y[f] = es.eigenvectors()(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(k)) / std::sqrt(mass[f]);
        out.push_back({es.eigenvalues()(static_cast<Eigen::Index>(k)), q, std::move(y)});
    }
    return out;
}

double block_lowest(const detail::FourierBlocks& blocks, int m, std::size_t q) {
    if (m == 1) return blocks.tridiagonal_symmetric(q).eigenvalue(0, 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blocks.dense_symmetric(q), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

TubeEigenResult block_eigs(const FermiOperator& op, std::size_t k) {
    const detail::FourierBlocks blocks(op);
    const int m = op.grid().m();
    const std::size_t nf = blocks.fiber_size(), nt = blocks.n_t();
    const double dt = op.fiber().dt;

    // (value, q, parity, fiber)
    std::vector<std::tuple<double, std::size_t, int, std::vector<double>>> cand;
    for (std::size_t q = 0; q < blocks.block_count(); ++q) {
        if (cand.size() >= k) {
            std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
            cand.resize(k);
            if (block_lowest(blocks, m, q) > std::get<0>(cand.back())) break;
        }
        for (auto& bp : block_pairs(blocks, m, q, k)) {
            cand.emplace_back(bp.value, q, 0, bp.fiber);
            if (blocks.multiplicity(q) == 2) cand.emplace_back(bp.value, q, 1, std::move(bp.fiber));
        }
    }
    std::stable_sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
    if (cand.size() > k) cand.resize(k);

    TubeEigenResult res;
    res.block_path = true;
    res.iterations = 1;
    for (auto& [value, q, parity, fiber] : cand) {
        std::vector<double> field(op.size());
        // M-normalisation: sum_j dt * c_j^2 = dt N (q = 0, Nyquist) or dt N / 2 otherwise.
        const double norm = std::sqrt(dt * static_cast<double>(nt) / static_cast<double>(blocks.multiplicity(q)));
        for (std::size_t j = 0; j < nt; ++j) {
            const double c = (parity == 0 ? blocks.cos_at(q, j) : blocks.sin_at(q, j)) / norm;
            for (std::size_t f = 0; f < nf; ++f) field[j * nf + f] = c * fiber[f];
        }
        res.values.push_back(value);
        res.fields.push_back(std::move(field));
        res.wavenumbers.push_back(q);
    }
    return res;
}

SpMat assemble(const FermiOperator& op) {
    std::vector<Eigen::Triplet<double>> trip;
    for (const Triplet& t : op.assemble())
        trip.emplace_back(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col), t.value);
    const auto n = static_cast<Eigen::Index>(op.size());
    SpMat k(n, n);
    k.setFromTriplets(trip.begin(), trip.end());
    return k;
}

// Subspace iteration on (K - s M)^{-1} M with Rayleigh-Ritz, s below the spectrum.
TubeEigenResult generic_eigs(const FermiOperator& op, std::size_t k, const TubeEigenOptions& opts) {
    const auto n = static_cast<Eigen::Index>(op.size());
    const SpMat kmat = assemble(op);
    Eigen::VectorXd mass(n);
    for (Eigen::Index i = 0; i < n; ++i) mass(i) = op.mass()[static_cast<std::size_t>(i)];
    double vmax = 0.0;
    for (double v : op.potential()) vmax = std::max(vmax, v);
    const double shift = -vmax - 1.0;  // K - s M is positive definite
    SpMat shifted = kmat;
    for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) -= shift * mass(i);
    Eigen::SimplicialLDLT<SpMat> chol(shifted);
    if (chol.info() != Eigen::Success) throw NoConvergence("tube_eigs: shifted factorisation failed");

    const auto p = static_cast<Eigen::Index>(std::min<std::size_t>(op.size(), k + 8));
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, p);
    // Deterministic start: smooth products of low modes plus a fixed pseudo-random tail.
    std::uint64_t state = 0x9E3779B97F4A7C15ull;
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index i = 0; i < n; ++i) {
            state = state * 6364136223846793005ull + 1442695040888963407ull;
            x(i, j) = static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
        }
    TubeEigenResult res;
    res.block_path = false;
    Eigen::VectorXd theta;
    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
        Eigen::MatrixXd y = chol.solve(mass.asDiagonal() * x);
        // Rayleigh-Ritz on span(y)
        Eigen::MatrixXd ky = kmat * y;
        Eigen::MatrixXd my = mass.asDiagonal() * y;
        Eigen::MatrixXd a = y.transpose() * ky;
        Eigen::MatrixXd b = y.transpose() * my;
        a = 0.5 * (a + a.transpose());
        b = 0.5 * (b + b.transpose());
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(a, b);
        theta = ges.eigenvalues();
        x = y * ges.eigenvectors();
        res.iterations = it;
        double worst = 0.0;
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(k); ++j) {
            Eigen::VectorXd r = kmat * x.col(j) - theta(j) * mass.cwiseProduct(x.col(j));
            const double scale = std::max(1.0, std::abs(theta(j))) * std::sqrt(x.col(j).dot(mass.cwiseProduct(x.col(j))));
            worst = std::max(worst, std::sqrt(r.dot(r.cwiseQuotient(mass))) / scale);
        }
        if (worst < opts.tol) break;
        if (it == opts.max_iterations) res.slow_convergence = true;
    }
    for (std::size_t j = 0; j < k && j < static_cast<std::size_t>(p); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        Eigen::VectorXd v = x.col(jj);
        v /= std::sqrt(v.dot(mass.cwiseProduct(v)));
        res.values.push_back(theta(jj));
        res.fields.emplace_back(v.data(), v.data() + v.size());
    }
    return res;
}

}  // namespace

TubeEigenResult tube_eigs(const FermiOperator& op, std::size_t k, const TubeEigenOptions& opts) {
    if (k < 1) throw InvalidArgument("tube_eigs: k must be >= 1");
    if (op.t_invariant() && !opts.force_generic) return block_eigs(op, k);
    return generic_eigs(op, k, opts);
}

std::size_t negative_count(const FermiOperator& op) {
    if (op.t_invariant()) {
        const detail::FourierBlocks blocks(op);
        const int m = op.grid().m();
        std::size_t count = 0;
        for (std::size_t q = 0; q < blocks.block_count(); ++q) {
            std::size_t neg = 0;
            if (m == 1) {
                neg = blocks.tridiagonal_symmetric(q).count_below(0.0);
            } else {
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blocks.dense_symmetric(q), Eigen::EigenvaluesOnly);
                for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
                    if (es.eigenvalues()(i) < 0.0) ++neg;
            }
            if (neg == 0) break;  // block spectra increase with q up to the Nyquist mode
            count += neg * blocks.multiplicity(q);
        }
        return count;
    }
    // Sylvester inertia of K from an LDL^T factorisation.
    Eigen::SimplicialLDLT<SpMat> ldlt(assemble(op));
    if (ldlt.info() != Eigen::Success) throw NoConvergence("negative_count: LDL^T factorisation failed");
    std::size_t count = 0;
    const Eigen::VectorXd d = ldlt.vectorD();
    for (Eigen::Index i = 0; i < d.size(); ++i)
        if (d(i) < 0.0) ++count;
    return count;
}

}  // namespace gelfand
