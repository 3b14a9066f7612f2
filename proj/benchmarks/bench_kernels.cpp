#include <benchmark/benchmark.h>

#include <random>

#include "pat/solvers.hpp"

using namespace pat;

namespace {
Vec random_vec(size_t n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    Vec v(n);
    for (double& x : v) x = (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 0.5;
    return v;
}
}  // namespace

static void SoftThreshold(benchmark::State& state) {
    size_t n = static_cast<size_t>(state.range(0));
    Vec y = random_vec(n, 1);
    Vec t(n, 0.05);
    for (auto _ : state) {
        Vec out = soft_threshold(y, t);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(SoftThreshold)->Range(1 << 12, 1 << 20);

static void UpdateWeights(benchmark::State& state) {
    size_t n = static_cast<size_t>(state.range(0));
    Vec f = random_vec(n, 2);
    size_t S = n / 50 + 1;
    for (auto _ : state) {
        WeightState ws = update_weights(f, S);
        benchmark::DoNotOptimize(ws.lambda.data());
    }
}
BENCHMARK(UpdateWeights)->Range(1 << 12, 1 << 20);

BENCHMARK_MAIN();
