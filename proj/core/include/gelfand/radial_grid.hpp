#pragma once

#include <cstddef>
#include <vector>

namespace gelfand {

/// Monotone grid on [0, 1] with r.front() == 0 and r.back() == 1.
struct RadialGrid {
    std::vector<double> r;

    /// `intervals` equal cells, intervals + 1 nodes.
    static RadialGrid uniform(std::size_t intervals);

    /// sinh-stretched grid clustering nodes inside r ~ core_width, used when the
    /// profile has a thin core (large centre value). core_width >= 1 gives a uniform grid.
    static RadialGrid graded(std::size_t intervals, double core_width);

    [[nodiscard]] std::size_t size() const noexcept { return r.size(); }
    [[nodiscard]] std::size_t intervals() const noexcept { return r.empty() ? 0 : r.size() - 1; }
    [[nodiscard]] bool operator==(const RadialGrid& other) const = default;
};

/// Throws InvalidArgument unless the grid starts at 0, ends at 1 and increases strictly.
void validate(const RadialGrid& grid);

}  // namespace gelfand
