#include <benchmark/benchmark.h>

#include "staleracer/delay_model.hpp"
#include "staleracer/rng.hpp"

using namespace staleracer;

namespace {

void bench_sample(benchmark::State& state, const DelayDistribution& dist) {
    RngStream rng(1234);
    double acc = 0.0;
    for (auto _ : state) acc += sample(dist, rng);
    benchmark::DoNotOptimize(acc);
    state.SetItemsProcessed(state.iterations());
}

void sample_exponential(benchmark::State& state) {
    bench_sample(state, Exponential(1.0));
}
void sample_shifted_exponential(benchmark::State& state) {
    bench_sample(state, ShiftedExponential(1.0, 1.0));
}
void sample_pareto(benchmark::State& state) {
    bench_sample(state, Pareto(2.0, 1.0));
}
void sample_hyper_exponential(benchmark::State& state) {
    bench_sample(state, HyperExponential({0.9, 0.1}, {2.0, 0.2}));
}

void survival_evaluation(benchmark::State& state) {
    const DelayDistribution dist = Pareto(2.0, 1.0);
    double acc = 0.0;
    double t = 1.0;
    for (auto _ : state) {
        acc += survival(dist, t);
        t += 1e-6;
    }
    benchmark::DoNotOptimize(acc);
}

}  // namespace

BENCHMARK(sample_exponential);
BENCHMARK(sample_shifted_exponential);
BENCHMARK(sample_pareto);
BENCHMARK(sample_hyper_exponential);
BENCHMARK(survival_evaluation);

BENCHMARK_MAIN();
