#include "gelfand/tube_linear.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <mutex>
#include <optional>
#include <string>

#include "fourier_blocks.hpp"
#include "gelfand/errors.hpp"

namespace gelfand {

const char* to_string(LinearMethod method) noexcept {
    switch (method) {
        case LinearMethod::Automatic: return "automatic";
        case LinearMethod::FourierBlock: return "fourier-block";
        case LinearMethod::Pcg: return "pcg";
        case LinearMethod::SparseLu: return "sparse-lu";
    }
    return "unknown";
}

double product_model_gap(std::span<const double> mu, double length, double eps) {
    const double w = 2.0 * std::numbers::pi / length;
    double gap = std::numeric_limits<double>::infinity();
    for (double m : mu) {
        gap = std::min(gap, std::abs(m));
        if (m < 0.0) {
            const double kc = std::sqrt(-m) / (eps * w);
            for (double k : {std::floor(kc), std::ceil(kc)})
                if (k >= 1.0) gap = std::min(gap, std::abs(m + eps * eps * (w * k) * (w * k)));
        }
    }
    return gap;
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

SpMat assemble_eigen(const FermiOperator& op) {
    std::vector<Eigen::Triplet<double>> trip;
    for (const Triplet& t : op.assemble())
        trip.emplace_back(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col), t.value);
    const auto n = static_cast<Eigen::Index>(op.size());
    SpMat k(n, n);
    k.setFromTriplets(trip.begin(), trip.end());
    return k;
}

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

// Smallest |eigenvalue| of the pencil (K_q, M) for a tridiagonal block, exact by Sturm counts.
double block_gap_tridiagonal(const SymTridiagonal& b) {
    const std::size_t neg = b.count_below(0.0);
    double gap = std::numeric_limits<double>::infinity();
    if (neg < b.size()) gap = std::min(gap, std::abs(b.eigenvalue(neg, 1e-13)));
    if (neg > 0) gap = std::min(gap, std::abs(b.eigenvalue(neg - 1, 1e-13)));
    return gap;
}

}  // namespace

struct LinearizedInverse::Impl {
    const FermiOperator* op = nullptr;
    LinearOptions opts;
    LinearMethod method = LinearMethod::Automatic;
    double product_gap = std::numeric_limits<double>::infinity();
    double discrete_gap = std::numeric_limits<double>::infinity();

    // Fourier block data
    std::optional<detail::FourierBlocks> blocks;
    std::vector<SymTridiagonal> tri;                        // m = 1
    std::vector<std::unique_ptr<Eigen::SparseLU<SpMat>>> lu;  // m = 2

    // SparseLU on the full operator, built lazily when PCG falls back
    mutable std::mutex lu_mutex;
    mutable std::unique_ptr<Eigen::SparseLU<SpMat>> full_lu;

    std::vector<double> diag;  // PCG preconditioner

    void prepare_blocks();
    void prepare_full_lu() const;
    [[nodiscard]] std::vector<double> solve_blocks(std::span<const double> rhs_weighted, bool t_const) const;
    [[nodiscard]] std::vector<double> solve_pcg(std::span<const double> b, std::size_t& iterations) const;
    [[nodiscard]] std::vector<double> solve_full_lu(std::span<const double> b) const;
};

void LinearizedInverse::Impl::prepare_blocks() {
    blocks.emplace(*op);
    const std::size_t nb = blocks->block_count();
    const bool one_d = op->grid().m() == 1;
    double gap = std::numeric_limits<double>::infinity();
    if (one_d) {
        tri.reserve(nb);
        for (std::size_t q = 0; q < nb; ++q) {
            tri.push_back(blocks->tridiagonal(q));
            gap = std::min(gap, block_gap_tridiagonal(blocks->tridiagonal_symmetric(q)));
        }
    } else {
        lu.resize(nb);
        const auto& mass = blocks->fiber_mass();
        const auto nf = static_cast<Eigen::Index>(blocks->fiber_size());
        Eigen::VectorXd mvec(nf);
        for (Eigen::Index i = 0; i < nf; ++i) mvec(i) = mass[static_cast<std::size_t>(i)];
        for (std::size_t q = 0; q < nb; ++q) {
            SpMat k = blocks->sparse(q);
            auto f = std::make_unique<Eigen::SparseLU<SpMat>>();
            f->compute(k);
            if (f->info() != Eigen::Success)
                throw NearSingular("fiber block " + std::to_string(q) + " is singular", 0.0);
            // Inverse power probe for the eigenvalue of (K_q, M) closest to 0:
            // ||x||_M / ||K^{-1} M x||_M >= |lambda_min| and decreases towards it.
            Eigen::VectorXd x = Eigen::VectorXd::Ones(nf);
            double est = std::numeric_limits<double>::infinity();
            for (int it = 0; it < 12; ++it) {
                Eigen::VectorXd y = f->solve(mvec.cwiseProduct(x));
                const double nx = std::sqrt(x.dot(mvec.cwiseProduct(x)));
                const double ny = std::sqrt(y.dot(mvec.cwiseProduct(y)));
                if (!(ny > 0.0) || !std::isfinite(ny)) {
                    est = 0.0;
                    break;
                }
                est = std::min(est, nx / ny);
                x = y / ny;
            }
            gap = std::min(gap, est);
            lu[q] = std::move(f);
        }
    }
    discrete_gap = gap;
}

void LinearizedInverse::Impl::prepare_full_lu() const {
    std::lock_guard lock(lu_mutex);
    if (full_lu) return;
    auto f = std::make_unique<Eigen::SparseLU<SpMat>>();
    f->compute(assemble_eigen(*op));
    if (f->info() != Eigen::Success) throw NearSingular("sparse LU factorisation failed: singular operator", 0.0);
    full_lu = std::move(f);
}

std::vector<double> LinearizedInverse::Impl::solve_blocks(std::span<const double> b, bool t_const) const {
    const std::size_t nf = blocks->fiber_size(), nt = blocks->n_t();
    const double dt = op->fiber().dt;
    std::vector<double> x(b.size());
    auto block_solve = [&](std::size_t q, std::vector<double>& v) {
        if (!tri.empty()) {
            v = tri[q].solve(v);
        } else {
            Eigen::Map<Eigen::VectorXd> mv(v.data(), static_cast<Eigen::Index>(v.size()));
            Eigen::VectorXd y = lu[q]->solve(mv);
            mv = y;
        }
    };
    if (t_const) {
        std::vector<double> v(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(nf));
        for (auto& e : v) e /= dt;
        block_solve(0, v);
        for (std::size_t j = 0; j < nt; ++j) std::copy(v.begin(), v.end(), x.begin() + static_cast<std::ptrdiff_t>(j * nf));
        return x;
    }
    std::vector<std::vector<double>> c, s;
    blocks->forward(b, c, s);
    for (std::size_t q = 0; q < c.size(); ++q) {
        for (auto& e : c[q]) e /= dt;
        for (auto& e : s[q]) e /= dt;
        block_solve(q, c[q]);
        if (blocks->multiplicity(q) == 2) block_solve(q, s[q]);
    }
    blocks->inverse(c, s, x);
    return x;
}

std::vector<double> LinearizedInverse::Impl::solve_pcg(std::span<const double> b, std::size_t& iterations) const {
    const std::size_t n = b.size();
    std::vector<double> x(n, 0.0), r(b.begin(), b.end()), z(n), p(n);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) return x;
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    p = z;
    double rz = 0.0;
    for (std::size_t i = 0; i < n; ++i) rz += r[i] * z[i];
    double best = 1.0;
    std::size_t since_best = 0;
    for (iterations = 0; iterations < opts.max_iterations; ++iterations) {
        const std::vector<double> kp = op->apply_weighted(p);
        double pkp = 0.0;
        for (std::size_t i = 0; i < n; ++i) pkp += p[i] * kp[i];
        if (!(pkp > 0.0)) throw NearSingular("PCG breakdown: operator is not positive definite", 0.0);
        const double alpha = rz / pkp;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * kp[i];
        }
        const double rel = norm2(r) / bnorm;
        if (rel < opts.tol) {
            ++iterations;
            return x;
        }
        if (rel < 0.5 * best) {
            best = rel;
            since_best = 0;
        } else if (++since_best > 2000) {
            throw NearSingular("PCG stalled at relative residual " + std::to_string(rel), 0.0);
        }
        for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
        double rz_new = 0.0;
        for (std::size_t i = 0; i < n; ++i) rz_new += r[i] * z[i];
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw NearSingular("PCG did not converge in " + std::to_string(opts.max_iterations) + " iterations", 0.0);
}

std::vector<double> LinearizedInverse::Impl::solve_full_lu(std::span<const double> b) const {
    Eigen::Map<const Eigen::VectorXd> mb(b.data(), static_cast<Eigen::Index>(b.size()));
    Eigen::VectorXd y = full_lu->solve(mb);
    return {y.data(), y.data() + y.size()};
}

LinearizedInverse::LinearizedInverse(const FermiOperator& op, LinearOptions opts) : impl_(std::make_unique<Impl>()) {
    Impl& im = *impl_;
    im.op = &op;
    im.opts = opts;
    if (op.product_model()) {
        im.product_gap = product_model_gap(*op.product_model(), op.grid().geometry.length, op.grid().eps);
        if (im.product_gap < opts.gap_tol)
            throw NearSingular("eps = " + std::to_string(op.grid().eps) +
                                   " is resonant: product-model gap " + std::to_string(im.product_gap),
                               im.product_gap);
    }
    LinearMethod m = opts.method;
    if (m == LinearMethod::Automatic) m = op.t_invariant() ? LinearMethod::FourierBlock : LinearMethod::Pcg;
    im.method = m;
    switch (m) {
        case LinearMethod::FourierBlock:
            im.prepare_blocks();
            if (im.discrete_gap < opts.gap_tol)
                throw NearSingular("discrete operator gap " + std::to_string(im.discrete_gap) + " below tolerance",
                                   im.discrete_gap);
            break;
        case LinearMethod::SparseLu:
            im.prepare_full_lu();
            break;
        case LinearMethod::Pcg:
            im.diag = op.diagonal();
            if (*std::min_element(im.diag.begin(), im.diag.end()) <= 0.0) {
                if (opts.method == LinearMethod::Pcg)
                    throw NearSingular("PCG needs a positive diagonal; operator is indefinite", 0.0);
                im.method = LinearMethod::SparseLu;
                im.prepare_full_lu();
            }
            break;
        case LinearMethod::Automatic:
            break;
    }
}

LinearizedInverse::~LinearizedInverse() = default;
LinearizedInverse::LinearizedInverse(LinearizedInverse&&) noexcept = default;
LinearizedInverse& LinearizedInverse::operator=(LinearizedInverse&&) noexcept = default;

LinearMethod LinearizedInverse::method() const noexcept { return impl_->method; }
double LinearizedInverse::product_gap() const noexcept { return impl_->product_gap; }
double LinearizedInverse::discrete_gap() const noexcept { return impl_->discrete_gap; }

std::vector<double> LinearizedInverse::solve(std::span<const double> f, LinearSolveReport* report) const {
    const Impl& im = *impl_;
    const FermiOperator& op = *im.op;
    if (f.size() != op.size()) throw DimensionMismatch("invert_L: right-hand side size");
    std::vector<double> b(f.size());
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = op.mass()[i] * f[i];

    std::size_t iterations = 0;
    std::vector<double> x;
    LinearMethod used = im.method;
    switch (im.method) {
        case LinearMethod::FourierBlock: {
            const std::size_t nf = op.grid().fiber_size();
            bool t_const = true;
            for (std::size_t i = nf; i < f.size() && t_const; ++i) t_const = f[i] == f[i % nf];
            x = im.solve_blocks(b, t_const);
            iterations = 1;
            break;
        }
        case LinearMethod::Pcg:
            try {
                x = im.solve_pcg(b, iterations);
            } catch (const NearSingular&) {
                if (im.opts.method == LinearMethod::Pcg) throw;
                // indefinite or stalled: direct fallback
                im.prepare_full_lu();
                x = im.solve_full_lu(b);
                used = LinearMethod::SparseLu;
                iterations = 1;
            }
            break;
        case LinearMethod::SparseLu:
            x = im.solve_full_lu(b);
            iterations = 1;
            break;
        case LinearMethod::Automatic:
            break;
    }

    const std::vector<double> kx = op.apply_weighted(x);
    double rn = 0.0;
    for (std::size_t i = 0; i < kx.size(); ++i) rn += (kx[i] - b[i]) * (kx[i] - b[i]);
    const double bn = norm2(b);
    const double rel = bn > 0.0 ? std::sqrt(rn) / bn : std::sqrt(rn);
    if (!(rel <= im.opts.accept_residual))
        throw NearSingular("linear solve residual " + std::to_string(rel) + " exceeds acceptance", im.discrete_gap);

    if (report) {
        report->method = used;
        report->iterations = iterations;
        report->relative_residual = rel;
        report->product_gap = im.product_gap;
        report->discrete_gap = im.discrete_gap;
    }
    return x;
}

LinearSolveReport invert_L(const FermiOperator& op, const TubeField& f, const LinearOptions& opts) {
    LinearizedInverse inv(op, opts);
    LinearSolveReport rep;
    rep.solution = inv.solve(f.values, &rep);
    return rep;
}

}  // namespace gelfand
