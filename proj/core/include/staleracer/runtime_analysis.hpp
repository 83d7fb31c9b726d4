#pragma once

#include <cstdint>
#include <string>

#include "staleracer/delay_model.hpp"
#include "staleracer/variant.hpp"

namespace staleracer {

// Expected wallclock per iteration, tagged with whether the value is exact
// for the given distribution or only an upper bound.
struct RuntimeResult {
    double seconds;
    enum class Kind { Exact, UpperBound } kind;
    std::string assumptions;  // short note on what the value relies on
};

// Per-iteration expected runtime of a variant under a delay distribution.
//
//   KSync       E[X_{K:P}]                exact, any distribution
//   KBatchSync  K * E[X_{1:P}]            exact if memoryless, else an upper
//                                         bound needing new-longer-than-used
//   KAsync      E[X_{K:P}]                exact if memoryless, else an upper
//                                         bound needing new-longer-than-used
//   KBatchAsync K * E[X] / P              exact (asymptotic push rate P/E[X])
//
// Throws BoundInapplicable when a bound needs an aging class the distribution
// does not satisfy, and propagates UnsupportedClosedForm where the order
// statistic has no closed form.
RuntimeResult expected_runtime(const VariantConfig& cfg, const DelayDistribution& dist);

// E[T_fully_sync] / E[T_fully_async] = P * E[X_{P:P}] / E[X]
double speedup_sync_over_async(const DelayDistribution& dist, int num_workers);

struct AsymptoticSpeedup {
    double exact;        // P * H_P
    double approximate;  // P * log P
};

// fully-async over fully-sync speedup for exponential delays; grows as P log P
AsymptoticSpeedup speedup_exponential_asymptotic(int num_workers);

// E[T_kasync] / E[T_kbatchasync] = P * E[X_{K:P}] / (K * E[X]), exponential delays
double kasync_over_kbatchasync_ratio(int wait_count, int num_workers);

// Bound on the expected wallclock of n = P/K consecutive K-async updates
// under shifted-exponential delays: one shift plus a telescoping sum of
// exponential order statistics over shrinking worker pools. Requires P
// divisible by K with P/K >= 2 (throws NotDivisible).
struct ConsecutiveBound {
    int iterations;              // n = P/K
    double total;                // bound on E[T_1 + ... + T_n]
    double per_iteration_approx; // K*shift/P + K*log(P)/(P*rate)
};

ConsecutiveBound shifted_exp_consecutive_bound(double shift, double rate, int wait_count,
                                               int num_workers);

struct McRuntime {
    double mean_iteration_time;
    double ci95;            // batch-means half-width
    double total_time;      // simulated span of the measured window
    long updates;           // updates in the measured window
    long total_pushes;      // gradient pushes over the whole run
    double push_rate;       // total pushes / final simulated time
};

// Measures per-iteration wallclock by running the delay dynamics alone (no
// gradient math). The first `warmup_fraction` of updates is discarded.
McRuntime monte_carlo_runtime(const VariantConfig& cfg, const DelayDistribution& dist,
                              long iterations, std::uint64_t seed,
                              double warmup_fraction = 0.1);

}  // namespace staleracer
