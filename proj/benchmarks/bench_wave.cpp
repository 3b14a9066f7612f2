#include <benchmark/benchmark.h>

#include "pat/phantom.hpp"
#include "pat/wave.hpp"

using namespace pat;

static void WaveForwardPhantomGrid(benchmark::State& state) {
    AcousticConfig cfg = AcousticConfig::from_cv(1500.0, 11.628e-6, 0.3, 42, 172);
    Propagator prop(cfg);
    ImageField p0 = make_phantom(PhantomSpec{}, cfg.h_x);
    for (auto _ : state) {
        DataField g = prop.forward(p0);
        benchmark::DoNotOptimize(g.values.data());
    }
}
BENCHMARK(WaveForwardPhantomGrid)->Unit(benchmark::kMillisecond);

static void WaveAdjointPhantomGrid(benchmark::State& state) {
    AcousticConfig cfg = AcousticConfig::from_cv(1500.0, 11.628e-6, 0.3, 42, 172);
    Propagator prop(cfg);
    DataField g = prop.forward(make_phantom(PhantomSpec{}, cfg.h_x));
    for (auto _ : state) {
        ImageField img = prop.adjoint(g);
        benchmark::DoNotOptimize(img.values.data());
    }
}
BENCHMARK(WaveAdjointPhantomGrid)->Unit(benchmark::kMillisecond);

static void WaveTimeReversalPhantomGrid(benchmark::State& state) {
    AcousticConfig cfg = AcousticConfig::from_cv(1500.0, 11.628e-6, 0.3, 42, 172);
    Propagator prop(cfg);
    DataField g = prop.forward(make_phantom(PhantomSpec{}, cfg.h_x));
    for (auto _ : state) {
        ImageField img = prop.time_reverse(g);
        benchmark::DoNotOptimize(img.values.data());
    }
}
BENCHMARK(WaveTimeReversalPhantomGrid)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
