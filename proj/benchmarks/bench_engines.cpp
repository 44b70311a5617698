#include <benchmark/benchmark.h>

#include "halfline/evolvers.hpp"
#include "halfline/limit_dynamics.hpp"
#include "halfline/presets.hpp"

using namespace halfline;

static void BM_Spectral(benchmark::State& state) {
    const Grid g = Grid::make(40.0, static_cast<std::size_t>(state.range(0)));
    const WaveFunction phi = make_preset("xexp", g);
    for (auto _ : state) {
        benchmark::DoNotOptimize(spectral_evolve(phi, {0.1, 1.0, 1.0}));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Spectral)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Complexity(benchmark::oNLogN);

// The kernel sums over the support of phi for every node, so keep the grid small.
// Coarser grids fail the boundary check on the datum.
static void BM_Kernel(benchmark::State& state) {
    const Grid g = Grid::make(20.0, static_cast<std::size_t>(state.range(0)));
    const WaveFunction phi = make_preset("xexp", g);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernel_evolve(phi, {0.1, 1.0, 1.0}));
    }
}
BENCHMARK(BM_Kernel)->Arg(1 << 14)->Arg(1 << 15)->Unit(benchmark::kMillisecond);

static void BM_ShiftV(benchmark::State& state) {
    const Grid g = Grid::make(40.0, static_cast<std::size_t>(state.range(0)));
    const WaveFunction phi = make_preset("xexp", g);
    for (auto _ : state) {
        benchmark::DoNotOptimize(shift_V(phi, 1.0, 0.7321));
    }
}
BENCHMARK(BM_ShiftV)->RangeMultiplier(4)->Range(1 << 12, 1 << 18);

BENCHMARK_MAIN();
