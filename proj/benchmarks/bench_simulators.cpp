#include "tscsim/simulators.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_GenerateResample(benchmark::State& state) {
    const auto kind = static_cast<tscsim::SimulatorKind>(state.range(0));
    const auto params = tscsim::default_params(kind);
    std::uint64_t r = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(tscsim::generate_resample(params, 42, r++));
    }
    state.SetLabel(std::string(tscsim::to_string(kind)));
}
BENCHMARK(BM_GenerateResample)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

} // namespace
