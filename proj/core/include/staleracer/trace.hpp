#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "staleracer/objective.hpp"
#include "staleracer/variant.hpp"

namespace staleracer {

// One parameter-server update. `staleness[l]` is j - tau(l, j): how many
// updates behind the parameter version contributor l computed its gradient on.
struct TraceRecord {
    double wallclock;
    double loss;          // NaN when not evaluated at this cadence step
    double grad_norm_sq;  // ||grad F(w_j)||^2 before the update; NaN when skipped
    std::vector<std::int32_t> staleness;
    std::vector<std::int32_t> contributors;  // worker ids in aggregation order
    std::int32_t wait_count;  // K in effect at this update
    std::int32_t slot;        // adaptive-controller slot index; 0 for fixed K
};

struct Trace {
    Variant variant;
    std::vector<TraceRecord> records;

    Eigen::VectorXd w0;
    // w after each update, aligned with `records`; empty when snapshot
    // storage was disabled
    std::vector<Eigen::VectorXd> parameters;

    bool diverged = false;  // stopped early on a non-finite loss or parameter

    long total_pushes = 0;        // gradients delivered to the server
    long total_tasks_started = 0;
    long total_cancelled = 0;     // tasks discarded by synchronous barriers
    long busy_at_end = 0;         // tasks still in flight when the run stopped
    double final_time = 0.0;

    bool has_parameters() const { return !parameters.empty(); }
    // parameter vector the j-th update was applied to
    const Eigen::VectorXd& parameters_before(std::size_t j) const;
};

// Empirical staleness coefficient: the ratio of the summed squared gradient
// drift ||grad F(w_j) - grad F(w_tau)||^2 (over updates and contributors) to
// the matching sum of ||grad F(w_j)||^2 (counted once per contributor).
// Needs parameter snapshots; throws InsufficientRecords without them.
double empirical_gamma(const Trace& trace, const Objective& obj);

// Fraction of contributions with zero staleness. Throws InsufficientRecords
// on an empty trace.
double empirical_p0(const Trace& trace);

// columns: j,wallclock,loss,grad_norm_sq,staleness_mean,staleness_max,contributors
// plus slot,K when `controller_columns` is set; numbers use 9 significant
// digits and contributors are pipe-separated
void write_trace_csv(const Trace& trace, std::ostream& out, bool controller_columns = false);

}  // namespace staleracer
