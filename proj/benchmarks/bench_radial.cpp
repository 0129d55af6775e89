#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "gelfand/radial_core.hpp"
#include "gelfand/spectral.hpp"
#include "gelfand/tridiagonal.hpp"

using namespace gelfand;

static void BM_BranchLambda(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(branch_lambda(m, 20.0));
}
BENCHMARK(BM_BranchLambda)->Arg(1)->Arg(2)->Arg(3)->Arg(9);

static void BM_RadialSolution(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(radial_solution(2, 1.0, n));
}
BENCHMARK(BM_RadialSolution)->Arg(512)->Arg(2048)->Arg(8192);

static void BM_SweepNoSpectra(benchmark::State& state) {
    SweepOptions opts;
    opts.with_spectra = false;
    opts.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(sweep_branch(5, 40.0, 400, opts));
}
BENCHMARK(BM_SweepNoSpectra)->Unit(benchmark::kMillisecond);

static void BM_SturmLowest(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    SymTridiagonal t;
    t.diag.assign(n, 2.0);
    t.off.assign(n - 1, -1.0);
    for (auto _ : state) benchmark::DoNotOptimize(t.lowest(8));
}
BENCHMARK(BM_SturmLowest)->Arg(1024)->Arg(4096)->Arg(16384);

static void BM_FullSpectrum(benchmark::State& state) {
    const auto profile = radial_solution(2, 1.0, 1024);
    const auto pot = potential_of(profile);
    for (auto _ : state) benchmark::DoNotOptimize(full_spectrum(2, pot, 20));
}
BENCHMARK(BM_FullSpectrum)->Unit(benchmark::kMillisecond);
