#include <benchmark/benchmark.h>

#include <random>

#include "pat/curvelet.hpp"
#include "pat/wedge.hpp"

using namespace pat;

namespace {

Array2d random_image(int rows, int cols, uint64_t seed) {
    std::mt19937_64 rng(seed);
    Array2d a(rows, cols);
    for (double& x : a.v) x = (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 0.5;
    return a;
}

}  // namespace

static void CurveletAnalyze(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    Tiling t = Tiling::build(n, n, 4, 32);
    Array2d u = random_image(n, n, 1);
    for (auto _ : state) {
        CurveletCoeffs c = analyze(u, t);
        benchmark::DoNotOptimize(c.data.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(CurveletAnalyze)->RangeMultiplier(2)->Range(64, 512)->Complexity();

static void CurveletRoundTrip(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    Tiling t = Tiling::build(n, n, 4, 32);
    Array2d u = random_image(n, n, 1);
    for (auto _ : state) {
        Array2d r = synthesize(analyze(u, t), t);
        benchmark::DoNotOptimize(r.data());
    }
}
BENCHMARK(CurveletRoundTrip)->Arg(128)->Arg(256);

static void WedgeRestrictedDataGrid(benchmark::State& state) {
    // the vessel-phantom data grid
    Tiling t = Tiling::build(591, 172, 4, 152);
    WedgeSpec s = discrete_angles(t, 0.3);
    Array2d g = random_image(591, 172, 2);
    for (auto _ : state) {
        CurveletCoeffs c = analyze_wedge(g, t, s);
        benchmark::DoNotOptimize(c.data.data());
    }
}
BENCHMARK(WedgeRestrictedDataGrid);

BENCHMARK_MAIN();
