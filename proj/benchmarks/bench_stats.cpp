#include "tscsim/random.hpp"
#include "tscsim/stats.hpp"

#include <benchmark/benchmark.h>

namespace {

std::vector<double> column(std::size_t n, std::uint64_t seed) {
    tscsim::Rng rng(seed);
    std::vector<double> out(n);
    for (auto& v : out) {
        v = static_cast<double>(rng.uniform_int(50, 100)) / 100.0;
    }
    return out;
}

void BM_WilcoxonExact(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto x = column(n, 1);
    const auto y = column(n, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tscsim::wilcoxon_signed_rank(x, y));
    }
}
BENCHMARK(BM_WilcoxonExact)->Arg(12)->Arg(20)->Arg(200);

void BM_PairwiseAndCliques(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    std::vector<std::string> names;
    for (std::size_t j = 0; j < k; ++j) {
        names.push_back("c" + std::to_string(j));
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < 200; ++r) {
        rows.push_back(column(k, 100 + r));
    }
    const tscsim::AccuracyMatrix m(names, rows);
    for (auto _ : state) {
        const auto summary = tscsim::summarize(m);
        const auto pairs = tscsim::pairwise_wilcoxon(m, 0.05);
        benchmark::DoNotOptimize(tscsim::form_cliques(summary, pairs));
    }
}
BENCHMARK(BM_PairwiseAndCliques)->Arg(3)->Arg(10);

} // namespace
