#include "radial_trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gelfand/errors.hpp"

namespace gelfand::detail {

UniversalTrajectory::UniversalTrajectory(int m, TrajectoryConfig cfg)
    : m_(m), cfg_(cfg), t0_(std::log(cfg.s0)), c_(2.0 * (m - 2)), log_c_(m >= 3 ? std::log(2.0 * (m - 2)) : 0.0) {
    if (m < 1) throw InvalidArgument("dimension must be >= 1");
    if (!(cfg.step > 0.0) || !(cfg.s0 > 0.0) || cfg.s0 > 1e-2)
        throw InvalidArgument("trajectory configuration out of range");
    nodes_.push_back(series(t0_));
}

TrajectoryState UniversalTrajectory::series(double t) const {
    const double s2 = std::exp(2.0 * t);
    const double m = m_;
    TrajectoryState st;
    st.t = t;
    st.y = -s2 / (2.0 * m) + s2 * s2 / (8.0 * m * (m + 2.0));
    st.yt = -s2 / m + s2 * s2 / (2.0 * m * (m + 2.0));
    return st;
}

TrajectoryState UniversalTrajectory::advance(const TrajectoryState& s, double dt) const {
    const double damp = m_ - 2.0;
    auto rhs = [&](double t, double y, double yt) {
        if (s.offset) return -damp * yt - c_ * std::expm1(y);
        return -damp * yt - std::exp(y + 2.0 * t);
    };
    const double t = s.t;
    const double k1y = s.yt, k1v = rhs(t, s.y, s.yt);
    const double k2y = s.yt + 0.5 * dt * k1v, k2v = rhs(t + 0.5 * dt, s.y + 0.5 * dt * k1y, k2y);
    const double k3y = s.yt + 0.5 * dt * k2v, k3v = rhs(t + 0.5 * dt, s.y + 0.5 * dt * k2y, k3y);
    const double k4y = s.yt + dt * k3v, k4v = rhs(t + dt, s.y + dt * k3y, k4y);
    TrajectoryState out;
    out.t = t + dt;
    out.offset = s.offset;
    out.y = s.y + dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    out.yt = s.yt + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    return out;
}

void UniversalTrajectory::push_next() {
    const std::size_t n = nodes_.size();
    TrajectoryState next = advance(nodes_.back(), cfg_.step);
    // Node times are t0 + n h exactly, not accumulated.
    next.t = t0_ + static_cast<double>(n) * cfg_.step;
    if (!std::isfinite(next.y) || !std::isfinite(next.yt))
        throw NonFiniteState("radial trajectory became non-finite at t = " + std::to_string(next.t));
    if (m_ >= 3 && !next.offset && next.t >= 0.0) {
        const double v = next.y + 2.0 * next.t;
        next.y = v - log_c_;
        next.yt = next.yt + 2.0;
        next.offset = true;
    }
    nodes_.push_back(next);
}

bool UniversalTrajectory::extend_to_a(double a_target, double t_limit) {
    while (centre(nodes_.back()) <= a_target) {
        if (nodes_.back().t > t_limit) return false;
        push_next();
    }
    return true;
}

void UniversalTrajectory::extend_to_t(double t) {
    while (nodes_.back().t < t) push_next();
}

TrajectoryState UniversalTrajectory::at(double t) const {
    if (t <= t0_) return series(t);
    const double x = (t - t0_) / cfg_.step;
    auto i = static_cast<std::size_t>(x);
    if (i + 1 >= nodes_.size()) {
        if (i < nodes_.size() && nodes_[i].t == t) return nodes_[i];
        throw OutOfRange("trajectory queried beyond cached range");
    }
    const double dt = t - nodes_[i].t;
    if (dt == 0.0) return nodes_[i];
    return advance(nodes_[i], dt);
}

double UniversalTrajectory::w(const TrajectoryState& s) const noexcept {
    return s.offset ? s.y + log_c_ - 2.0 * s.t : s.y;
}

double UniversalTrajectory::wt(const TrajectoryState& s) const noexcept {
    return s.offset ? s.yt - 2.0 : s.yt;
}

double UniversalTrajectory::log_lambda(const TrajectoryState& s) const noexcept {
    return s.offset ? s.y + log_c_ : s.y + 2.0 * s.t;
}

double UniversalTrajectory::lambda_minus_level(const TrajectoryState& s) const noexcept {
    if (s.offset) return c_ * std::expm1(s.y);
    return std::exp(s.y + 2.0 * s.t) - c_;
}

double UniversalTrajectory::fold_function(const TrajectoryState& s) const noexcept {
    return s.offset ? s.yt : s.yt + 2.0;
}

double UniversalTrajectory::level_gap(const TrajectoryState& s, double target) const noexcept {
    if (s.offset) return s.y - std::log1p((target - c_) / c_);
    return s.y + 2.0 * s.t - std::log(target);
}

std::size_t UniversalTrajectory::first_node_above(double a) const {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), a,
                               [this](double value, const TrajectoryState& s) { return value < centre(s); });
    if (it == nodes_.end()) throw OutOfRange("centre value beyond cached trajectory");
    return static_cast<std::size_t>(it - nodes_.begin());
}

TrajectoryState UniversalTrajectory::locate_centre(double a) const {
    if (a < centre(nodes_.front())) {
        // Root inside the series region: B x^2 + A x + a = 0 with x = s^2.
        const double m = m_;
        const double A = -1.0 / (2.0 * m);
        const double B = 1.0 / (8.0 * m * (m + 2.0));
        const double x = 2.0 * a / (-A + std::sqrt(A * A - 4.0 * a * B));
        return series(0.5 * std::log(x));
    }
    const std::size_t j = first_node_above(a);
    return refine(j - 1, [&](const TrajectoryState& s) { return w(s) + a; });
}

}  // namespace gelfand::detail
