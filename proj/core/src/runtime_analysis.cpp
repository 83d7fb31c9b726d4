#include "staleracer/runtime_analysis.hpp"

#include <cmath>

#include "staleracer/errors.hpp"
#include "staleracer/order_statistics.hpp"
#include "staleracer/simulator.hpp"
#include "staleracer/statistics.hpp"

namespace staleracer {

RuntimeResult expected_runtime(const VariantConfig& cfg, const DelayDistribution& dist) {
    cfg.validate();
    const AgingClass aging = classify_aging(dist);
    const int k = cfg.wait_count;
    const int p = cfg.num_workers;

    switch (cfg.variant) {
        case Variant::KSync:
            return {expected_order_statistic(dist, k, p), RuntimeResult::Kind::Exact,
                    "order statistic of the delay distribution"};

        case Variant::KBatchSync: {
            if (aging == AgingClass::NewShorterThanUsed)
                throw BoundInapplicable(
                    "k_batch_sync bound needs memoryless or new-longer-than-used delays");
            const double v = k * expected_order_statistic(dist, 1, p);
            if (aging == AgingClass::Memoryless)
                return {v, RuntimeResult::Kind::Exact, "memoryless restarts"};
            return {v, RuntimeResult::Kind::UpperBound,
                    "restarted tasks finish no later than fresh ones"};
        }

        case Variant::KAsync: {
            if (aging == AgingClass::NewShorterThanUsed)
                throw BoundInapplicable(
                    "k_async bound needs memoryless or new-longer-than-used delays");
            const double v = expected_order_statistic(dist, k, p);
            if (aging == AgingClass::Memoryless)
                return {v, RuntimeResult::Kind::Exact,
                        "in-progress work is distributionally fresh"};
            return {v, RuntimeResult::Kind::UpperBound,
                    "head starts only help; bounded by the k_sync barrier"};
        }

        case Variant::KBatchAsync:
            return {static_cast<double>(k) * mean(dist) / static_cast<double>(p),
                    RuntimeResult::Kind::Exact,
                    "renewal push rate P/E[X], asymptotic in the iteration count"};
    }
    throw std::logic_error("unreachable variant");
}

double speedup_sync_over_async(const DelayDistribution& dist, int num_workers) {
    if (num_workers < 1) throw InvalidRank("need num_workers >= 1");
    return static_cast<double>(num_workers) *
           expected_order_statistic(dist, num_workers, num_workers) / mean(dist);
}

AsymptoticSpeedup speedup_exponential_asymptotic(int num_workers) {
    if (num_workers < 1) throw InvalidRank("need num_workers >= 1");
    const double p = static_cast<double>(num_workers);
    return {p * harmonic_number(num_workers), p * std::log(p)};
}

double kasync_over_kbatchasync_ratio(int wait_count, int num_workers) {
    if (num_workers < 1 || wait_count < 1 || wait_count > num_workers)
        throw InvalidRank("need 1 <= wait_count <= num_workers");
    // exponential delays; the rate cancels in the ratio
    return static_cast<double>(num_workers) *
           (harmonic_number(num_workers) - harmonic_number(num_workers - wait_count)) /
           static_cast<double>(wait_count);
}

ConsecutiveBound shifted_exp_consecutive_bound(double shift, double rate, int wait_count,
                                               int num_workers) {
    if (!(shift >= 0.0) || !(rate > 0.0))
        throw std::invalid_argument("need shift >= 0 and rate > 0");
    if (wait_count < 1 || num_workers < wait_count)
        throw InvalidRank("need 1 <= wait_count <= num_workers");
    if (num_workers % wait_count != 0)
        throw NotDivisible("consecutive-iteration bound needs wait_count to divide num_workers");
    const int n = num_workers / wait_count;
    if (n < 2) throw NotDivisible("consecutive-iteration bound needs num_workers/wait_count >= 2");

    // one shared shift, then exponential order statistics over pools that
    // shrink by K busy workers per committed iteration
    const Exponential tail(rate);
    double total = shift;
    for (int i = 0; i < n; ++i)
        total += expected_order_statistic(DelayDistribution(tail), wait_count,
                                          num_workers - i * wait_count);

    const double k = static_cast<double>(wait_count);
    const double p = static_cast<double>(num_workers);
    const double approx = k * shift / p + k * std::log(p) / (p * rate);
    return {n, total, approx};
}

McRuntime monte_carlo_runtime(const VariantConfig& cfg, const DelayDistribution& dist,
                              long iterations, std::uint64_t seed, double warmup_fraction) {
    if (iterations < 100) throw std::invalid_argument("need at least 100 iterations");
    if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0))
        throw std::invalid_argument("warmup fraction must be in [0, 1)");

    SimulationOptions opts;
    opts.loss_cadence = 0;
    opts.store_parameters = false;
    const Trace trace = run_simulation(cfg, dist, nullptr, Eigen::VectorXd(),
                                       Horizon::iterations(iterations), {seed, seed ^ 1},
                                       opts);

    const std::size_t total = trace.records.size();
    const std::size_t skip = static_cast<std::size_t>(warmup_fraction * total);
    std::vector<double> gaps;
    gaps.reserve(total - skip);
    double prev = skip == 0 ? 0.0 : trace.records[skip - 1].wallclock;
    const double window_start = prev;
    for (std::size_t i = skip; i < total; ++i) {
        gaps.push_back(trace.records[i].wallclock - prev);
        prev = trace.records[i].wallclock;
    }
    const MeanCi ci = batch_means_ci(gaps);

    McRuntime out;
    out.mean_iteration_time = ci.mean;
    out.ci95 = ci.ci95;
    out.total_time = trace.final_time - window_start;
    out.updates = static_cast<long>(gaps.size());
    out.total_pushes = trace.total_pushes;
    out.push_rate = trace.total_pushes / trace.final_time;
    return out;
}

}  // namespace staleracer
