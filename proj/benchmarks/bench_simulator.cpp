#include <benchmark/benchmark.h>

#include "staleracer/config.hpp"
#include "staleracer/gradient_oracle.hpp"
#include "staleracer/objective.hpp"
#include "staleracer/rng.hpp"
#include "staleracer/simulator.hpp"

using namespace staleracer;

namespace {

// event-loop throughput: updates per second for each discipline on the
// dim-10 quadratic testbed

void bench_variant(benchmark::State& state, Variant variant) {
    const Objective obj = quadratic_from_spectrum(1.0, 4.0, 10);
    const GradientOracle oracle(&obj, AdditiveGaussian{1.0}, 1);
    const Eigen::VectorXd w0 = build_w0(W0Excess{50.0}, obj);
    const VariantConfig cfg{variant, 4, 8, 1, 0.05};
    const long updates = state.range(0);
    SimulationOptions opts;
    opts.loss_cadence = 0;
    opts.store_parameters = false;

    std::uint64_t seed = 0;
    for (auto _ : state) {
        const Trace tr = run_simulation(cfg, Exponential(1.0), &oracle, w0,
                                        Horizon::iterations(updates),
                                        Seeds{seed, seed + 1}, opts);
        benchmark::DoNotOptimize(tr.records.size());
        seed += 2;
    }
    state.SetItemsProcessed(state.iterations() * updates);
}

void simulate_k_sync(benchmark::State& state) { bench_variant(state, Variant::KSync); }
void simulate_k_batch_sync(benchmark::State& state) {
    bench_variant(state, Variant::KBatchSync);
}
void simulate_k_async(benchmark::State& state) { bench_variant(state, Variant::KAsync); }
void simulate_k_batch_async(benchmark::State& state) {
    bench_variant(state, Variant::KBatchAsync);
}

void gradient_additive(benchmark::State& state) {
    const Objective obj = quadratic_from_spectrum(1.0, 4.0, static_cast<int>(state.range(0)));
    const GradientOracle oracle(&obj, AdditiveGaussian{1.0}, 1);
    Eigen::VectorXd w = Eigen::VectorXd::Constant(state.range(0), 2.0);
    RngStream rng(5);
    double acc = 0.0;
    for (auto _ : state) acc += stochastic_gradient(oracle, w, rng).sum();
    benchmark::DoNotOptimize(acc);
    state.SetItemsProcessed(state.iterations());
}

void gradient_subsampling(benchmark::State& state) {
    const Objective obj =
        build_objective(LogisticRecipeSpec{256, static_cast<int>(state.range(0)), 1.0, 3, 0.1});
    const GradientOracle oracle(&obj, Subsampling{}, 8);
    Eigen::VectorXd w = Eigen::VectorXd::Constant(state.range(0), 0.5);
    RngStream rng(5);
    double acc = 0.0;
    for (auto _ : state) acc += stochastic_gradient(oracle, w, rng).sum();
    benchmark::DoNotOptimize(acc);
    state.SetItemsProcessed(state.iterations());
}

}  // namespace

BENCHMARK(simulate_k_sync)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(simulate_k_batch_sync)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(simulate_k_async)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(simulate_k_batch_async)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(gradient_additive)->Arg(10)->Arg(100);
BENCHMARK(gradient_subsampling)->Arg(10)->Arg(100);
