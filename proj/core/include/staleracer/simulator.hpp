#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "staleracer/delay_model.hpp"
#include "staleracer/gradient_oracle.hpp"
#include "staleracer/trace.hpp"
#include "staleracer/variant.hpp"

namespace staleracer {

struct Horizon {
    enum class Kind { Iterations, SimTime };
    Kind kind;
    long max_updates = 0;
    double max_time = 0.0;

    static Horizon iterations(long n);
    static Horizon sim_time(double seconds);
};

struct Seeds {
    std::uint64_t delay;
    std::uint64_t data;
};

struct SimulationOptions {
    // evaluate loss and ||grad F||^2 on every s-th update; 0 disables
    int loss_cadence = 1;
    // keep per-update parameter snapshots in the trace (needed for the
    // empirical staleness coefficient)
    bool store_parameters = true;
};

// Deterministic single-threaded event simulation of one parameter-server run.
// Delay draws come from the delay stream, gradient noise from the data
// stream; identical seeds give bitwise-identical traces.
//
// Draw-order conventions (fixed so runs are reproducible and couplable):
//   - delay redraws happen in ascending worker id within an event
//   - contributions are aggregated, and noise consumed, sorted by
//     (worker id, arrival order)
class Simulator {
  public:
    // A null oracle runs the delay dynamics alone (no parameter state).
    Simulator(VariantConfig cfg, DelayDistribution dist, const GradientOracle* oracle,
              Eigen::VectorXd w0, Seeds seeds, SimulationOptions opts = {});

    // Advances through events until one parameter update commits. Returns
    // false, committing nothing, when the horizon is exhausted or a previous
    // update diverged.
    bool step(const Horizon& limit);

    double now() const { return sim_time_; }
    long updates() const { return update_count_; }
    const Eigen::VectorXd& parameters() const { return w_; }
    double current_loss() const;  // full loss at the live parameters
    int wait_count() const { return wait_count_; }

    // Controller hooks: a new K takes effect at the next update commit
    // (synchronous variants re-barrier anyway; async in-flight work is kept).
    void set_wait_count(int k);
    void set_slot(int slot) { slot_ = slot; }

    Trace take_trace();

  private:
    struct Contribution {
        int worker;
        long read_version;
        long arrival;
    };
    struct Worker {
        double task_end = 0.0;
        long read_version = 0;
        bool busy = false;
    };

    bool sync_step(const Horizon& limit);
    bool async_step(const Horizon& limit);
    int next_completion() const;
    void start_task(int worker, long version);
    void commit_update(std::vector<Contribution> used);
    void prune_history();
    const Eigen::VectorXd& version_parameters(long version) const;

    VariantConfig cfg_;
    DelayDistribution dist_;
    const GradientOracle* oracle_;
    SimulationOptions opts_;
    RngStream delay_rng_;
    RngStream data_rng_;

    std::vector<Worker> workers_;
    std::vector<Contribution> pending_;
    long arrival_counter_ = 0;

    Eigen::VectorXd w_;
    // parameter versions [history_base_, update_count_); entry i holds the
    // parameters some in-flight task may still have read
    std::deque<Eigen::VectorXd> history_;
    long history_base_ = 0;

    double sim_time_ = 0.0;
    long update_count_ = 0;
    int wait_count_;
    int slot_ = 0;
    bool halted_ = false;

    Trace trace_;
};

// Runs to the horizon. Throws HorizonTooSmall when not a single update fits.
Trace run_simulation(const VariantConfig& cfg, const DelayDistribution& dist,
                     const GradientOracle* oracle, const Eigen::VectorXd& w0,
                     const Horizon& horizon, Seeds seeds, SimulationOptions opts = {});

}  // namespace staleracer
