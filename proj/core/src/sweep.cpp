#include "staleracer/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "staleracer/csv.hpp"
#include "staleracer/errors.hpp"
#include "staleracer/order_statistics.hpp"
#include "staleracer/runtime_analysis.hpp"
#include "staleracer/statistics.hpp"

namespace staleracer {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct RepOutcome {
    std::vector<double> time_to_target;  // aligned with cfg.targets; NaN = unreached
    double final_floor = kNan;
};

RepOutcome run_replication(const ExperimentConfig& cfg, const GridEntry& cell,
                           const Objective& obj, const Eigen::VectorXd& w0, int rep) {
    VariantConfig vc = cfg.variant_config();
    vc.variant = cell.variant;
    vc.wait_count = cell.wait_count;

    const GradientOracle oracle(&obj, cfg.noise, cfg.minibatch_size);
    SimulationOptions opts;
    opts.loss_cadence = cfg.loss_cadence;
    opts.store_parameters = false;
    const Seeds seeds{derive_seed(cfg.seeds.delay, static_cast<std::uint64_t>(rep)),
                      derive_seed(cfg.seeds.data, static_cast<std::uint64_t>(rep))};
    const Trace trace = run_simulation(vc, cfg.dist, &oracle, w0, cfg.horizon, seeds, opts);

    const double f_star = optimal_value(obj);
    RepOutcome out;
    out.time_to_target.assign(cfg.targets.size(), kNan);
    std::vector<double> excess_curve;
    excess_curve.reserve(trace.records.size());
    for (const auto& rec : trace.records) {
        if (!std::isfinite(rec.loss)) continue;
        const double excess = rec.loss - f_star;
        excess_curve.push_back(excess);
        for (std::size_t t = 0; t < cfg.targets.size(); ++t)
            if (std::isnan(out.time_to_target[t]) && excess <= cfg.targets[t])
                out.time_to_target[t] = rec.wallclock;
    }
    if (!excess_curve.empty()) {
        const std::size_t tail = std::max<std::size_t>(1, excess_curve.size() / 5);
        double s = 0.0;
        for (std::size_t i = excess_curve.size() - tail; i < excess_curve.size(); ++i)
            s += excess_curve[i];
        out.final_floor = s / static_cast<double>(tail);
    }
    return out;
}

void run_pool(int jobs, std::size_t total, const std::function<void(std::size_t)>& work) {
    if (jobs < 2 || total < 2) {
        for (std::size_t i = 0; i < total; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    const int n = std::min<int>(jobs, static_cast<int>(total));
    threads.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t)
        threads.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) work(i);
        });
    for (auto& th : threads) th.join();
}

}  // namespace

std::vector<FrontierPoint> sweep_tradeoff(const ExperimentConfig& cfg, int jobs) {
    const Objective obj = build_objective(cfg.objective);
    const Eigen::VectorXd w0 = build_w0(cfg.w0, obj);

    const std::size_t cells = cfg.grid.size();
    const std::size_t reps = static_cast<std::size_t>(cfg.replications);
    std::vector<std::vector<RepOutcome>> outcomes(cells, std::vector<RepOutcome>(reps));

    // cell x replication jobs are independent; results land in fixed slots so
    // aggregation below is order-independent
    run_pool(jobs, cells * reps, [&](std::size_t i) {
        const std::size_t cell = i / reps;
        const std::size_t rep = i % reps;
        outcomes[cell][rep] = run_replication(
            cfg, cfg.grid[cell], obj, w0,
            static_cast<int>(cell * 100000 + rep));
    });

    std::vector<FrontierPoint> points;
    for (std::size_t cell = 0; cell < cells; ++cell) {
        std::vector<double> floors;
        for (const auto& rep : outcomes[cell])
            if (std::isfinite(rep.final_floor)) floors.push_back(rep.final_floor);
        const double floor_med = floors.empty() ? kNan : median(floors);
        const double floor_iqr = floors.empty() ? kNan : iqr(floors);

        const std::size_t rows = cfg.targets.empty() ? 1 : cfg.targets.size();
        for (std::size_t t = 0; t < rows; ++t) {
            FrontierPoint pt;
            pt.variant = cfg.grid[cell].variant;
            pt.wait_count = cfg.grid[cell].wait_count;
            pt.target = cfg.targets.empty() ? kNan : cfg.targets[t];
            pt.median_final_floor = floor_med;
            pt.iqr_final_floor = floor_iqr;
            pt.replications = cfg.replications;
            pt.unreached = 0;
            std::vector<double> times;
            if (!cfg.targets.empty()) {
                for (const auto& rep : outcomes[cell]) {
                    if (std::isfinite(rep.time_to_target[t]))
                        times.push_back(rep.time_to_target[t]);
                    else
                        ++pt.unreached;
                }
            }
            pt.median_time_to_target = times.empty() ? kNan : median(times);
            pt.iqr_time_to_target = times.empty() ? kNan : iqr(times);
            points.push_back(pt);
        }
    }

    std::sort(points.begin(), points.end(), [](const FrontierPoint& a, const FrontierPoint& b) {
        if (a.wait_count != b.wait_count) return a.wait_count < b.wait_count;
        if (a.variant != b.variant) return static_cast<int>(a.variant) < static_cast<int>(b.variant);
        // NaN targets (floor-only rows) sort last
        if (std::isnan(a.target) != std::isnan(b.target)) return std::isnan(b.target);
        return a.target > b.target;
    });
    return points;
}

static void put_opt(std::ostream& out, double v) {
    if (std::isfinite(v)) out << format_sig9(v);
}

void write_frontier_csv(const std::vector<FrontierPoint>& points, std::ostream& out) {
    out << "variant,K,target,median_time_to_target,iqr_time_to_target,"
           "median_final_floor,iqr_final_floor,replications,unreached\n";
    for (const auto& p : points) {
        out << variant_name(p.variant) << ',' << p.wait_count << ',';
        put_opt(out, p.target);
        out << ',';
        put_opt(out, p.median_time_to_target);
        out << ',';
        put_opt(out, p.iqr_time_to_target);
        out << ',';
        put_opt(out, p.median_final_floor);
        out << ',';
        put_opt(out, p.iqr_final_floor);
        out << ',' << p.replications << ',' << p.unreached << "\n";
    }
}

std::string label_distribution(const DelayDistribution& dist) {
    std::ostringstream s;
    std::visit(
        [&s](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                s << "exponential(" << d.rate << ")";
            } else if constexpr (std::is_same_v<T, ShiftedExponential>) {
                s << "shifted_exponential(" << d.shift << ";" << d.rate << ")";
            } else if constexpr (std::is_same_v<T, Pareto>) {
                s << "pareto(" << d.shape << ";" << d.scale << ")";
            } else {
                s << "hyper_exponential(";
                for (std::size_t i = 0; i < d.rates.size(); ++i) {
                    if (i > 0) s << ";";
                    s << d.branch_probs[i] << "@" << d.rates[i];
                }
                s << ")";
            }
        },
        dist);
    return s.str();
}

std::vector<SpeedupPoint> speedup_curve(const std::vector<DelayDistribution>& dists,
                                        const std::vector<int>& p_values,
                                        std::size_t mc_samples, std::uint64_t seed) {
    std::vector<SpeedupPoint> points;
    std::uint64_t cell = 0;
    for (const auto& dist : dists) {
        for (int p : p_values) {
            SpeedupPoint pt;
            pt.dist_label = label_distribution(dist);
            pt.num_workers = p;
            try {
                pt.log_speedup = std::log(speedup_sync_over_async(dist, p));
                pt.closed_form = true;
                pt.ci95 = 0.0;
            } catch (const UnsupportedClosedForm&) {
                const OrderStatEstimate os =
                    mc_expected_order_statistic(dist, p, p, mc_samples, derive_seed(seed, cell));
                const double ratio = p * os.value / mean(dist);
                pt.log_speedup = std::log(ratio);
                pt.closed_form = false;
                pt.ci95 = 1.96 * os.std_error / os.value;  // delta method on the log
            }
            points.push_back(pt);
            ++cell;
        }
    }
    return points;
}

void write_speedup_csv(const std::vector<SpeedupPoint>& points, std::ostream& out) {
    out << "dist,P,log_speedup,method,ci95\n";
    for (const auto& p : points) {
        out << p.dist_label << ',' << p.num_workers << ',' << format_sig9(p.log_speedup)
            << ',' << (p.closed_form ? "closed_form" : "monte_carlo") << ','
            << format_sig9(p.ci95) << "\n";
    }
}

}  // namespace staleracer
