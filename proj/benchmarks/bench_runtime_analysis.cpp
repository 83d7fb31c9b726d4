#include <benchmark/benchmark.h>

#include "staleracer/order_statistics.hpp"
#include "staleracer/runtime_analysis.hpp"

using namespace staleracer;

namespace {

// closed form vs Monte-Carlo cost for the same expected-runtime question

void closed_form_runtime(benchmark::State& state) {
    const VariantConfig cfg{Variant::KSync, static_cast<int>(state.range(0)), 16, 1, 0.1};
    const DelayDistribution dist = Exponential(1.0);
    double acc = 0.0;
    for (auto _ : state) acc += expected_runtime(cfg, dist).seconds;
    benchmark::DoNotOptimize(acc);
}

void monte_carlo_runtime_10k(benchmark::State& state) {
    const VariantConfig cfg{Variant::KSync, static_cast<int>(state.range(0)), 16, 1, 0.1};
    const DelayDistribution dist = Exponential(1.0);
    double acc = 0.0;
    std::uint64_t seed = 1;
    for (auto _ : state) acc += monte_carlo_runtime(cfg, dist, 10000, seed++).mean_iteration_time;
    benchmark::DoNotOptimize(acc);
}

void order_statistic_table(benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    const DelayDistribution dist = Pareto(2.0, 1.0);
    double acc = 0.0;
    for (auto _ : state)
        for (int k = 1; k <= p; ++k) acc += expected_order_statistic(dist, k, p);
    benchmark::DoNotOptimize(acc);
}

}  // namespace

BENCHMARK(closed_form_runtime)->Arg(4)->Arg(8);
BENCHMARK(monte_carlo_runtime_10k)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(order_statistic_table)->Arg(8)->Arg(32);
