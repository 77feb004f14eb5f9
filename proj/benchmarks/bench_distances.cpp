#include "tscsim/classifiers.hpp"
#include "tscsim/simulators.hpp"

#include <benchmark/benchmark.h>

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
    tscsim::Rng rng(seed);
    return tscsim::white_noise(n, 1.0, rng);
}

void BM_DtwBanded(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto window = static_cast<std::size_t>(state.range(1)) * n / 100;
    const auto a = noise(n, 1);
    const auto b = noise(n, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tscsim::dtw_banded(a, b, window));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * (2 * window + 1)));
}
BENCHMARK(BM_DtwBanded)->Args({100, 10})->Args({100, 100})->Args({1000, 5})->Args({1000, 100});

void BM_LbKeogh(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = noise(n, 3);
    const auto env = tscsim::make_envelope(noise(n, 4), n / 10);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tscsim::lb_keogh(a, env));
    }
}
BENCHMARK(BM_LbKeogh)->Arg(100)->Arg(1000);

void BM_SelectWindow(benchmark::State& state) {
    tscsim::ShapeletParams params;
    const auto ds = tscsim::generate_resample(params, 7, 0);
    const auto grid = tscsim::default_window_grid();
    for (auto _ : state) {
        benchmark::DoNotOptimize(tscsim::select_dtw_window(ds.train, grid));
    }
}
BENCHMARK(BM_SelectWindow)->Unit(benchmark::kMillisecond);

void BM_IntervalForestFit(benchmark::State& state) {
    const auto ds = tscsim::generate_resample(tscsim::IntervalParams{}, 7, 0);
    for (auto _ : state) {
        tscsim::Rng rng(1);
        benchmark::DoNotOptimize(tscsim::IntervalForest::fit(ds.train, 100, 31, rng));
    }
}
BENCHMARK(BM_IntervalForestFit)->Unit(benchmark::kMillisecond);

} // namespace
