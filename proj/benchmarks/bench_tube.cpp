#include <benchmark/benchmark.h>

#include <cmath>
#include <cstddef>
#include <vector>

#include "gelfand/circle_model.hpp"
#include "gelfand/fermi_operator.hpp"
#include "gelfand/radial_core.hpp"
#include "gelfand/tube_grid.hpp"
#include "gelfand/tube_linear.hpp"
#include "gelfand/tube_solver.hpp"

using namespace gelfand;

namespace {

RadialProfile stable_base(int m) {
    // lower branch at lambda = 0.5 (m = 1) / lambda = 1 (m = 2)
    if (m == 1) return radial_solution(1, 2.0 * std::log(closed_form_1d(0.5).alphas[0]), 1024);
    return radial_solution(2, std::log(closed_form_2d(1.0).b1), 1024);
}

TubeGrid bench_grid(int m, std::size_t nt, std::size_t n1) {
    return TubeGrid::make(CircleGeometry::circle(1.0, m), 0.1, nt, n1, m == 2 ? 32 : 0);
}

}  // namespace

static void BM_BlockFactor(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const auto base = stable_base(m);
    const auto grid = bench_grid(m, 64, m == 1 ? 128 : 24);
    const auto op = linearized_operator(base, grid);
    for (auto _ : state) benchmark::DoNotOptimize(LinearizedInverse(op));
}
BENCHMARK(BM_BlockFactor)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_BlockSolve(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const auto base = stable_base(m);
    const auto grid = bench_grid(m, 64, m == 1 ? 128 : 24);
    const auto op = linearized_operator(base, grid);
    const LinearizedInverse inverse(op);
    const std::vector<double> f(grid.size(), 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(inverse.solve(f));
    state.counters["unknowns"] = static_cast<double>(grid.size());
}
BENCHMARK(BM_BlockSolve)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_FixedPoint(benchmark::State& state) {
    const auto base = stable_base(1);
    const auto grid = bench_grid(1, 32, 64);
    for (auto _ : state) benchmark::DoNotOptimize(fixed_point_solve(base, grid));
}
BENCHMARK(BM_FixedPoint)->Unit(benchmark::kMillisecond);

static void BM_MorseEstimate(benchmark::State& state) {
    const std::vector<double> mu{-3.0, 1.5, 4.0};
    for (auto _ : state) benchmark::DoNotOptimize(morse_index_estimate(mu, 2.0 * 3.14159265358979, 1e-3));
}
BENCHMARK(BM_MorseEstimate);
