#include "staleracer/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "staleracer/errors.hpp"

namespace staleracer {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

Horizon Horizon::iterations(long n) {
    if (n < 1) throw std::invalid_argument("horizon needs at least one iteration");
    Horizon h;
    h.kind = Kind::Iterations;
    h.max_updates = n;
    return h;
}

Horizon Horizon::sim_time(double seconds) {
    if (!(seconds > 0.0)) throw std::invalid_argument("horizon needs a positive budget");
    Horizon h;
    h.kind = Kind::SimTime;
    h.max_time = seconds;
    return h;
}

Simulator::Simulator(VariantConfig cfg, DelayDistribution dist, const GradientOracle* oracle,
                     Eigen::VectorXd w0, Seeds seeds, SimulationOptions opts)
    : cfg_(cfg),
      dist_(std::move(dist)),
      oracle_(oracle),
      opts_(opts),
      delay_rng_(seeds.delay),
      data_rng_(seeds.data),
      w_(std::move(w0)),
      wait_count_(cfg.wait_count) {
    cfg_.validate();
    if (opts_.loss_cadence < 0) throw std::invalid_argument("loss cadence must be >= 0");
    if (oracle_ != nullptr && dimension(*oracle_->objective) != w_.size())
        throw DimensionMismatch("w0 dimension does not match the objective");

    workers_.resize(static_cast<std::size_t>(cfg_.num_workers));
    trace_.variant = cfg_.variant;
    trace_.w0 = w_;

    if (!is_synchronous(cfg_.variant)) {
        // async workers are busy from time zero; sync variants draw at each barrier
        for (int i = 0; i < cfg_.num_workers; ++i) start_task(i, 0);
    }
}

void Simulator::start_task(int worker, long version) {
    auto& w = workers_[static_cast<std::size_t>(worker)];
    w.task_end = sim_time_ + sample(dist_, delay_rng_);
    w.read_version = version;
    w.busy = true;
    ++trace_.total_tasks_started;
}

int Simulator::next_completion() const {
    int best = -1;
    for (int i = 0; i < cfg_.num_workers; ++i) {
        const auto& w = workers_[static_cast<std::size_t>(i)];
        if (!w.busy) continue;
        if (best < 0 || w.task_end < workers_[static_cast<std::size_t>(best)].task_end)
            best = i;  // ties resolve to the lowest worker id
    }
    if (best < 0) throw std::logic_error("event loop has no busy worker");
    return best;
}

const Eigen::VectorXd& Simulator::version_parameters(long version) const {
    if (version == update_count_) return w_;
    return history_[static_cast<std::size_t>(version - history_base_)];
}

void Simulator::prune_history() {
    long min_ref = update_count_;
    for (const auto& w : workers_)
        if (w.busy) min_ref = std::min(min_ref, w.read_version);
    for (const auto& c : pending_) min_ref = std::min(min_ref, c.read_version);
    while (history_base_ < min_ref && !history_.empty()) {
        history_.pop_front();
        ++history_base_;
    }
}

void Simulator::commit_update(std::vector<Contribution> used) {
    std::sort(used.begin(), used.end(), [](const Contribution& a, const Contribution& b) {
        return a.worker != b.worker ? a.worker < b.worker : a.arrival < b.arrival;
    });

    TraceRecord rec;
    rec.wallclock = sim_time_;
    rec.loss = kNan;
    rec.grad_norm_sq = kNan;
    rec.wait_count = static_cast<std::int32_t>(used.size());
    rec.slot = static_cast<std::int32_t>(slot_);
    rec.staleness.reserve(used.size());
    rec.contributors.reserve(used.size());
    for (const auto& c : used) {
        rec.staleness.push_back(static_cast<std::int32_t>(update_count_ - c.read_version));
        rec.contributors.push_back(static_cast<std::int32_t>(c.worker));
    }

    const bool measure = oracle_ != nullptr && opts_.loss_cadence > 0 &&
                         trace_.records.size() % static_cast<std::size_t>(opts_.loss_cadence) == 0;

    if (oracle_ != nullptr) {
        if (measure)
            rec.grad_norm_sq = full_gradient(*oracle_->objective, w_).squaredNorm();

        const bool additive = std::holds_alternative<AdditiveGaussian>(oracle_->noise);
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(w_.size());
        Eigen::VectorXd base;
        long base_version = -1;
        for (const auto& c : used) {
            const Eigen::VectorXd& w_read = version_parameters(c.read_version);
            if (additive && c.read_version != base_version) {
                base = full_gradient(*oracle_->objective, w_read);
                base_version = c.read_version;
            }
            acc += stochastic_gradient_from_base(*oracle_, w_read, base, data_rng_);
        }
        const double step = cfg_.learning_rate / static_cast<double>(used.size());

        const bool keep_history = !is_synchronous(cfg_.variant);
        if (keep_history) history_.push_back(w_);
        w_ -= step * acc;

        if (measure) {
            rec.loss = full_loss(*oracle_->objective, w_);
            if (!std::isfinite(rec.loss)) trace_.diverged = true;
        }
        if (!w_.allFinite()) trace_.diverged = true;
        if (opts_.store_parameters) trace_.parameters.push_back(w_);
    }

    ++update_count_;
    trace_.records.push_back(std::move(rec));
    trace_.final_time = sim_time_;
    if (trace_.diverged) halted_ = true;
}

bool Simulator::sync_step(const Horizon& limit) {
    // every barrier iteration starts with fresh draws on all P workers
    const long version = update_count_;
    for (int i = 0; i < cfg_.num_workers; ++i) start_task(i, version);

    std::vector<Contribution> used;
    used.reserve(static_cast<std::size_t>(wait_count_));

    if (cfg_.variant == Variant::KSync) {
        std::vector<int> order(workers_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [this](int a, int b) {
            const double ta = workers_[static_cast<std::size_t>(a)].task_end;
            const double tb = workers_[static_cast<std::size_t>(b)].task_end;
            return ta != tb ? ta < tb : a < b;
        });
        const double update_time =
            workers_[static_cast<std::size_t>(order[static_cast<std::size_t>(wait_count_ - 1)])]
                .task_end;
        if (limit.kind == Horizon::Kind::SimTime && update_time > limit.max_time) {
            halted_ = true;
            return false;
        }
        for (int l = 0; l < wait_count_; ++l)
            used.push_back({order[static_cast<std::size_t>(l)], version, arrival_counter_++});
        sim_time_ = update_time;
        trace_.total_pushes += wait_count_;
        trace_.total_cancelled += cfg_.num_workers - wait_count_;
    } else {
        // K-batch-sync: finishers restart on the same version until K
        // mini-batches are in
        while (static_cast<int>(used.size()) < wait_count_) {
            const int who = next_completion();
            const double t = workers_[static_cast<std::size_t>(who)].task_end;
            if (limit.kind == Horizon::Kind::SimTime && t > limit.max_time) {
                halted_ = true;
                return false;
            }
            sim_time_ = t;
            used.push_back({who, version, arrival_counter_++});
            ++trace_.total_pushes;
            if (static_cast<int>(used.size()) < wait_count_)
                start_task(who, version);
            else
                workers_[static_cast<std::size_t>(who)].busy = false;
        }
        trace_.total_cancelled += cfg_.num_workers - 1;
    }

    for (auto& w : workers_) w.busy = false;  // barrier cancels whatever is in flight
    commit_update(std::move(used));
    return true;
}

bool Simulator::async_step(const Horizon& limit) {
    while (true) {
        const int who = next_completion();
        auto& w = workers_[static_cast<std::size_t>(who)];
        if (limit.kind == Horizon::Kind::SimTime && w.task_end > limit.max_time) {
            halted_ = true;
            return false;
        }
        sim_time_ = w.task_end;
        pending_.push_back({who, w.read_version, arrival_counter_++});
        ++trace_.total_pushes;
        w.busy = false;

        if (cfg_.variant == Variant::KBatchAsync) {
            // refetch the current (pre-update) parameters and keep going
            start_task(who, update_count_);
        }

        if (static_cast<int>(pending_.size()) >= wait_count_) {
            std::vector<Contribution> used(pending_.begin(), pending_.begin() + wait_count_);
            pending_.erase(pending_.begin(), pending_.begin() + wait_count_);
            std::sort(used.begin(), used.end(),
                      [](const Contribution& a, const Contribution& b) {
                          return a.worker != b.worker ? a.worker < b.worker
                                                      : a.arrival < b.arrival;
                      });
            commit_update(used);
            if (cfg_.variant == Variant::KAsync) {
                // exactly the aggregated contributors fetch the new version;
                // `used` is sorted, so delay draws go in worker-id order
                for (const auto& c : used) start_task(c.worker, update_count_);
            }
            prune_history();
            return true;
        }
    }
}

bool Simulator::step(const Horizon& limit) {
    if (halted_) return false;
    if (limit.kind == Horizon::Kind::Iterations && update_count_ >= limit.max_updates)
        return false;
    return is_synchronous(cfg_.variant) ? sync_step(limit) : async_step(limit);
}

double Simulator::current_loss() const {
    if (oracle_ == nullptr) throw std::logic_error("no objective attached");
    return full_loss(*oracle_->objective, w_);
}

void Simulator::set_wait_count(int k) {
    if (k < 1 || k > cfg_.num_workers)
        throw std::invalid_argument("wait count must be in [1, num_workers]");
    wait_count_ = k;
}

Trace Simulator::take_trace() {
    trace_.busy_at_end = 0;
    for (const auto& w : workers_)
        if (w.busy) ++trace_.busy_at_end;
    return std::move(trace_);
}

Trace run_simulation(const VariantConfig& cfg, const DelayDistribution& dist,
                     const GradientOracle* oracle, const Eigen::VectorXd& w0,
                     const Horizon& horizon, Seeds seeds, SimulationOptions opts) {
    Simulator sim(cfg, dist, oracle, w0, seeds, opts);
    while (sim.step(horizon)) {
    }
    Trace trace = sim.take_trace();
    if (trace.records.empty())
        throw HorizonTooSmall("horizon admits no parameter update");
    return trace;
}

}  // namespace staleracer
