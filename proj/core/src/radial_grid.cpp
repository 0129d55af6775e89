#include "gelfand/radial_grid.hpp"

#include <cmath>

#include "gelfand/errors.hpp"

namespace gelfand {

RadialGrid RadialGrid::uniform(std::size_t intervals) {
    if (intervals < 2) throw InvalidArgument("radial grid needs at least 2 intervals");
    RadialGrid g;
    g.r.resize(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i)
        g.r[i] = static_cast<double>(i) / static_cast<double>(intervals);
    g.r.back() = 1.0;
    return g;
}

RadialGrid RadialGrid::graded(std::size_t intervals, double core_width) {
    if (!(core_width > 0.0)) throw InvalidArgument("graded grid: core width must be positive");
    if (core_width >= 1.0) return uniform(intervals);
    if (intervals < 2) throw InvalidArgument("radial grid needs at least 2 intervals");
    // r(x) = sinh(beta x) / sinh(beta). Spacing at the origin is beta / sinh(beta) / N,
    // so beta / sinh(beta) = core_width puts cells of size core_width / N inside the core.
    double lo = 1e-8, hi = 700.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid / std::sinh(mid) > core_width)
            lo = mid;
        else
            hi = mid;
    }
    const double beta = 0.5 * (lo + hi);
    RadialGrid g;
    g.r.resize(intervals + 1);
    const double sb = std::sinh(beta);
    for (std::size_t i = 0; i <= intervals; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(intervals);
        g.r[i] = std::sinh(beta * x) / sb;
    }
    g.r.front() = 0.0;
    g.r.back() = 1.0;
    return g;
}

void validate(const RadialGrid& grid) {
    if (grid.r.size() < 3) throw InvalidArgument("radial grid needs at least 3 nodes");
    if (grid.r.front() != 0.0 || grid.r.back() != 1.0)
        throw InvalidArgument("radial grid must span [0, 1]");
    for (std::size_t i = 1; i < grid.r.size(); ++i)
        if (!(grid.r[i] > grid.r[i - 1])) throw InvalidArgument("radial grid must increase strictly");
}

}  // namespace gelfand
