#pragma once

// Universal radial solution W(s) of W'' + (m-1)/s W' + e^W = 0, W(0) = 0, W'(0) = 0,
// integrated in t = ln s. Every ball solution is a rescaling of it:
//   u(r) = a + W(S r),  W(S) = -a,  lambda = e^{-a} S^2.
// With V = W + 2t the equation is autonomous, V'' + (m-2) V' + e^V = 2(m-2), and
// lambda(a) = e^{V(t)} at the t where W(t) = -a.
//
// For m >= 3 and t >= 0 the state is stored as d = V - ln(2(m-2)) so that the tiny
// oscillation of lambda(a) around 2(m-2) keeps full relative precision.

#include <cstddef>
#include <vector>

namespace gelfand::detail {

struct TrajectoryConfig {
    double step = 2e-3;  // fixed RK4 step in t
    double s0 = 1e-5;    // series start radius
};

struct TrajectoryState {
    double t = 0.0;
    double y = 0.0;   // W, or d in offset form
    double yt = 0.0;  // dW/dt, or dd/dt
    bool offset = false;
};

class UniversalTrajectory {
public:
    explicit UniversalTrajectory(int m, TrajectoryConfig cfg = {});

    [[nodiscard]] int dim() const noexcept { return m_; }
    [[nodiscard]] double step() const noexcept { return cfg_.step; }
    [[nodiscard]] double t0() const noexcept { return t0_; }
    /// 2(m-2); meaningful for m >= 3.
    [[nodiscard]] double level() const noexcept { return c_; }

    /// Grows the node cache until a(t) > a_target or t > t_limit.
    /// Returns false if t_limit was reached first. Throws NonFiniteState.
    bool extend_to_a(double a_target, double t_limit);
    void extend_to_t(double t);

    [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }
    [[nodiscard]] const TrajectoryState& node(std::size_t i) const { return nodes_[i]; }

    /// RK4 step of length dt without switching representation.
    [[nodiscard]] TrajectoryState advance(const TrajectoryState& s, double dt) const;
    /// State at arbitrary t: series below t0, else a partial step from the cached node below t.
    [[nodiscard]] TrajectoryState at(double t) const;
    /// Series expansion of the state at t (valid for e^t << 1).
    [[nodiscard]] TrajectoryState series(double t) const;

    [[nodiscard]] double w(const TrajectoryState& s) const noexcept;
    [[nodiscard]] double wt(const TrajectoryState& s) const noexcept;
    [[nodiscard]] double centre(const TrajectoryState& s) const noexcept { return -w(s); }
    [[nodiscard]] double log_lambda(const TrajectoryState& s) const noexcept;
    /// lambda - 2(m-2), accurate when lambda is close to the level (offset form).
    [[nodiscard]] double lambda_minus_level(const TrajectoryState& s) const noexcept;
    /// dV/dt; zero at folds of lambda(a).
    [[nodiscard]] double fold_function(const TrajectoryState& s) const noexcept;
    /// Signed distance of log lambda from log(target), computed in the stored representation.
    [[nodiscard]] double level_gap(const TrajectoryState& s, double target) const noexcept;

    /// Bisection for g(state) = 0 inside the step that starts at node i. g must change
    /// sign between node(i) and node(i+1).
    template <class G>
    [[nodiscard]] TrajectoryState refine(std::size_t i, G&& g) const {
        const TrajectoryState& s = nodes_[i];
        double lo = 0.0, hi = nodes_[i + 1].t - s.t;
        const double glo = g(s);
        for (int it = 0; it < 64; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            const double gm = g(advance(s, mid));
            if ((gm < 0.0) == (glo < 0.0))
                lo = mid;
            else
                hi = mid;
        }
        return advance(s, 0.5 * (lo + hi));
    }

    /// First cached node index whose centre value a exceeds `a`. Requires a cached past it.
    [[nodiscard]] std::size_t first_node_above(double a) const;

    /// Solve W(t) = -a. Small a inside the series region is handled analytically.
    [[nodiscard]] TrajectoryState locate_centre(double a) const;

private:
    void push_next();

    int m_;
    TrajectoryConfig cfg_;
    double t0_;
    double c_;
    double log_c_;
    std::vector<TrajectoryState> nodes_;
};

}  // namespace gelfand::detail
