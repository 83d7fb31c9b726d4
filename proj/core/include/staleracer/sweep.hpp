#pragma once

#include <iosfwd>
#include <vector>

#include "staleracer/config.hpp"

namespace staleracer {

// One cell of the error-runtime frontier: a (variant, K, target) combination
// with replication statistics. Unreached targets are counted, not fatal.
struct FrontierPoint {
    Variant variant;
    int wait_count;
    double target;                 // NaN for the floor-only row when no targets given
    double median_time_to_target;  // NaN when no replication reached the target
    double iqr_time_to_target;
    double median_final_floor;     // trailing-20% mean excess loss
    double iqr_final_floor;
    int replications;
    int unreached;
};

// Runs grid cells x replications (independent jobs, `jobs` threads), then
// aggregates. Rows come back sorted by (K, variant, target descending) and
// are deterministic for a fixed config regardless of thread count.
std::vector<FrontierPoint> sweep_tradeoff(const ExperimentConfig& cfg, int jobs = 1);

void write_frontier_csv(const std::vector<FrontierPoint>& points, std::ostream& out);

struct SpeedupPoint {
    std::string dist_label;
    int num_workers;
    double log_speedup;
    bool closed_form;  // false = Monte-Carlo fallback
    double ci95;       // half-width on the log value; 0 for closed form
};

// log(E[T_fully_sync]/E[T_fully_async]) per (dist, P), analytic where the
// order statistic has a closed form, Monte-Carlo otherwise.
std::vector<SpeedupPoint> speedup_curve(const std::vector<DelayDistribution>& dists,
                                        const std::vector<int>& p_values,
                                        std::size_t mc_samples = 200000,
                                        std::uint64_t seed = 1);

void write_speedup_csv(const std::vector<SpeedupPoint>& points, std::ostream& out);

// short human label like "pareto(2;1)"; never contains commas
std::string label_distribution(const DelayDistribution& dist);

}  // namespace staleracer
