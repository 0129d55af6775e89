#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace gelfand {

/// Planar round circle (or, with curvature 0, a periodic straight segment) carrying an
/// eps-tube with fiber dimension m = n - 1.
struct CircleGeometry {
    double radius = 1.0;     // infinite for the flat control
    double curvature = 1.0;  // 1 / radius, or 0
    double length = 0.0;     // circumference
    int fiber_dim = 1;

    static CircleGeometry circle(double radius, int fiber_dim);
    static CircleGeometry flat(double length, int fiber_dim);

    [[nodiscard]] int ambient_dim() const noexcept { return fiber_dim + 1; }
    /// Volume factor h = 1 - kappa eps z1 at scaled fiber coordinate z1 in [-1, 1].
    [[nodiscard]] double h(double z1, double eps) const noexcept { return 1.0 - curvature * eps * z1; }
    /// Throws InvalidArgument unless eps > 0 and eps * kappa < 1.
    void check_eps(double eps) const;
};

/// 0, then (2 pi k / length)^2 twice for k = 1, 2, ...; truncated to `count`.
std::vector<double> nu_eigenvalues(double length, std::size_t count);

struct ProductSpectrum {
    std::vector<double> mu;
    std::vector<double> nu;
    double eps = 0.0;
    std::vector<double> combined;  // every mu_i + eps^2 nu_j, ascending
};

/// All |mu| * |nu| sums; callers choose the truncation through the input lengths.
ProductSpectrum product_spectrum(std::span<const double> mu, std::span<const double> nu, double eps);

/// eps values in [eps_min, eps_max] where mu1 + eps^2 nu_j = 0, descending. The set
/// accumulates at 0, so the lower cut eps_min > 0 is required.
std::vector<double> resonant_eps(double mu1, double length, double eps_max, double eps_min);
/// Union over every negative entry of mu, descending, duplicates merged.
std::vector<double> resonant_eps(std::span<const double> mu, double length, double eps_max, double eps_min);

struct SpectralGap {
    double delta = 0.0;         // min |mu_i + eps^2 nu_j|
    bool has_bound = false;     // only when mu1 < 0 and the sign change lies inside nu
    std::size_t bound_index = 0;  // 1-based k: first nu_k with mu1 + eps^2 nu_k > 0
    double bound = 0.0;         // eps^2 max_{1 <= j < k} (nu_{j+1} - nu_j)
    bool bound_holds = true;
};

SpectralGap spectral_gap(const ProductSpectrum& spectrum);

struct NonresonantSet {
    double eps = 0.0;
    int exponent = 2;  // N
    std::vector<std::pair<double, double>> intervals;  // open intervals, ascending
    double measure = 0.0;
    double deficiency = 0.0;  // eps - measure
    std::vector<double> excluded_centres;  // resonances whose eps^N neighbourhood meets (eps, 2 eps)
};

/// (eps, 2 eps) minus the union of (s - eps^N, s + eps^N), s resonant for mu1.
NonresonantSet nonresonant_set(int N, double eps, double mu1, double length);
NonresonantSet nonresonant_set(int N, double eps, std::span<const double> mu, double length);

/// #{(i, j): mu_i + eps^2 nu_j < 0} with multiplicities; nu is generated from the circle
/// length far enough that no further term can be negative.
std::size_t morse_index_estimate(std::span<const double> mu, double length, double eps);
/// Same count against an explicit nu list.
std::size_t morse_index_estimate(std::span<const double> mu, std::span<const double> nu, double eps);

/// Least-squares p in y ~ C x^p (log-log fit); needs >= 2 positive pairs.
double power_law_exponent(std::span<const double> x, std::span<const double> y);

struct EigenvalueSlope {
    std::size_t mu_index = 0;
    std::size_t nu_index = 0;
    double value = 0.0;
    double finite_difference = 0.0;
    double analytic = 0.0;  // 2 eps nu_j
};

/// Central-difference d/d eps of every combined eigenvalue below alpha.
std::vector<EigenvalueSlope> eigenvalue_slope(std::span<const double> mu, std::span<const double> nu, double eps,
                                              double d_eps, double alpha);

struct ResonanceSweepRow {
    double eps = 0.0;
    double delta = 0.0;
    std::size_t index = 0;
};

struct ResonanceReport {
    double mu1 = 0.0;
    double length = 0.0;
    int exponent = 3;
    std::vector<double> resonant;                // S in the query window, descending
    std::vector<ResonanceSweepRow> sweep;        // delta and product Morse index per eps
    std::vector<NonresonantSet> nonresonant;     // A_eps^N per eps
};

/// mu: fiber eigenvalues ascending with multiplicity (mu[0] = mu1).
ResonanceReport resonance_report(std::span<const double> mu, double length, std::span<const double> eps_list,
                                 int N, double eps_min_resonant);

}  // namespace gelfand
