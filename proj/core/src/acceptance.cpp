#include "staleracer/acceptance.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "staleracer/adasync.hpp"
#include "staleracer/csv.hpp"
#include "staleracer/error_bounds.hpp"
#include "staleracer/gradient_oracle.hpp"
#include "staleracer/objective.hpp"
#include "staleracer/order_statistics.hpp"
#include "staleracer/rng.hpp"
#include "staleracer/runtime_analysis.hpp"
#include "staleracer/simulator.hpp"
#include "staleracer/statistics.hpp"
#include "staleracer/sweep.hpp"
#include "staleracer/trace.hpp"

namespace staleracer {
namespace {

constexpr std::uint64_t kSeed = 6021023;
constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Strongly convex quadratic testbed shared by the statistical criteria:
// eigenvalues log-spaced on [1, 4] (c = 1, L = 4), additive gradient noise
// with sigma^2 = 1 at minibatch size 1, and a start 50 above the optimum.
struct Testbed {
    Objective objective = quadratic_from_spectrum(1.0, 4.0, 10);
    GradientOracle oracle{&objective, AdditiveGaussian{1.0}, 1};
    Eigen::VectorXd w0;
    double f_star = 0.0;
    double gap = 0.0;

    Testbed() {
        const auto& q = std::get<Quadratic>(objective);
        const double t = std::sqrt(2.0 * 50.0 / q.eigenvalues.sum());
        w0 = q.w_star + t * Eigen::VectorXd::Ones(q.w_star.size());
        f_star = optimal_value(objective);
        gap = full_loss(objective, w0) - f_star;
    }

    Testbed(const Testbed&) = delete;
    Testbed& operator=(const Testbed&) = delete;
};

double trailing_excess(const Trace& trace, double f_star) {
    std::vector<double> xs;
    for (const auto& r : trace.records)
        if (std::isfinite(r.loss)) xs.push_back(r.loss - f_star);
    if (xs.empty()) return kInf;
    const std::size_t win = std::max<std::size_t>(1, xs.size() / 5);
    return mean(std::vector<double>(xs.end() - static_cast<long>(win), xs.end()));
}

double first_crossing(const Trace& trace, double f_star, double threshold) {
    for (const auto& r : trace.records)
        if (std::isfinite(r.loss) && r.loss - f_star <= threshold) return r.wallclock;
    return kInf;
}

std::string fmt(double x, int precision = 4) {
    std::ostringstream os;
    os << std::setprecision(precision) << x;
    return os.str();
}

CriterionResult finish(int id, std::string name, bool pass, double measured, double expected,
                       double tolerance, double limit, Clock::time_point t0,
                       std::string details) {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    r.measured = measured;
    r.expected = expected;
    r.tolerance = tolerance;
    r.seconds = seconds_since(t0);
    r.limit_seconds = limit;
    r.pass = pass && (limit <= 0.0 || r.seconds <= limit);
    r.details = std::move(details);
    if (pass && !r.pass) r.details += " [over time budget]";
    return r;
}

// 1. Synchronous iteration time matches the order-statistic closed form.
CriterionResult criterion_sync_order_stats() {
    const auto t0 = Clock::now();
    const DelayDistribution dist = Exponential(1.0);
    double worst = 0.0;
    for (int k = 1; k <= 8; ++k) {
        const VariantConfig cfg{Variant::KSync, k, 8, 1, 0.1};
        const double analytic = harmonic_number(8) - harmonic_number(8 - k);
        const McRuntime mc =
            monte_carlo_runtime(cfg, dist, 100000, derive_seed(kSeed, 100 + k));
        worst = std::max(worst, std::abs(mc.mean_iteration_time - analytic) / analytic);
    }
    return finish(1, "sync-order-statistic-runtime", worst <= 0.01, worst, 0.0, 0.01, 30.0,
                  t0, "worst relative error " + fmt(worst) + " over K=1..8, P=8 (tol 0.01)");
}

// 2. Fully-sync over fully-async speedup matches P * H_P for memoryless delays.
CriterionResult criterion_speedup_ratio() {
    const auto t0 = Clock::now();
    const DelayDistribution dist = Exponential(1.0);
    double worst = 0.0;
    for (int p : {2, 4, 8, 16}) {
        const McRuntime sync = monte_carlo_runtime({Variant::KSync, p, p, 1, 0.1}, dist,
                                                   100000, derive_seed(kSeed, 200 + p));
        const McRuntime async = monte_carlo_runtime({Variant::KAsync, 1, p, 1, 0.1}, dist,
                                                    100000, derive_seed(kSeed, 250 + p));
        const double ratio = sync.mean_iteration_time / async.mean_iteration_time;
        const double expected = p * harmonic_number(p);
        worst = std::max(worst, std::abs(ratio - expected) / expected);
    }
    return finish(2, "sync-over-async-speedup", worst <= 0.02, worst, 0.0, 0.02, 60.0, t0,
                  "worst relative error " + fmt(worst) + " over P in {2,4,8,16} (tol 0.02)");
}

// 3. Batch-async update times follow the renewal rate P / E[X].
CriterionResult criterion_renewal_rate() {
    const auto t0 = Clock::now();
    const VariantConfig cfg{Variant::KBatchAsync, 2, 8, 1, 0.1};
    const McRuntime mc =
        monte_carlo_runtime(cfg, Pareto(2.0, 1.0), 100000, derive_seed(kSeed, 300));
    const double worst =
        std::max(std::abs(mc.mean_iteration_time - 0.5) / 0.5, std::abs(mc.push_rate - 4.0) / 4.0);
    return finish(3, "batch-async-renewal-rate", worst <= 0.01, worst, 0.0, 0.01, 60.0, t0,
                  "mean " + fmt(mc.mean_iteration_time) + " vs 0.5, push rate " +
                      fmt(mc.push_rate) + " vs 4 (worst rel err " + fmt(worst) + ", tol 0.01)");
}

// 4. One-sided runtime bounds hold for non-memoryless delays.
CriterionResult criterion_runtime_upper_bounds() {
    const auto t0 = Clock::now();
    const std::array<DelayDistribution, 2> dists = {ShiftedExponential(1.0, 1.0),
                                                    Pareto(2.0, 1.0)};
    double worst = -kInf;  // mean - (bound + 3ci); any positive value is a violation
    std::uint64_t idx = 0;
    for (const auto& dist : dists) {
        for (int k : {2, 4}) {
            for (Variant v : {Variant::KBatchSync, Variant::KAsync}) {
                const VariantConfig cfg{v, k, 8, 1, 0.1};
                const double bound = expected_runtime(cfg, dist).seconds;
                const McRuntime mc =
                    monte_carlo_runtime(cfg, dist, 20000, derive_seed(kSeed, 400 + idx));
                worst = std::max(worst, mc.mean_iteration_time - (bound + 3.0 * mc.ci95));
                ++idx;
            }
        }
    }
    return finish(4, "runtime-upper-bounds", worst <= 0.0, worst, 0.0, 0.0, 120.0, t0,
                  "worst mean-over-bound excess " + fmt(worst) +
                      " across 8 (dist, K, variant) cells; must be <= 0");
}

// 5. Telescoping bound on consecutive async iterations under a setup cost,
//    and its advantage over the matching synchronous runtime.
CriterionResult criterion_consecutive_bound() {
    const auto t0 = Clock::now();
    const DelayDistribution dist = ShiftedExponential(1.0, 1.0);
    const VariantConfig cfg{Variant::KAsync, 2, 8, 1, 0.1};
    const Horizon four = Horizon::iterations(4);

    std::vector<double> totals;
    totals.reserve(4000);
    for (int r = 0; r < 4000; ++r) {
        const Trace tr = run_simulation(cfg, dist, nullptr, Eigen::VectorXd(), four,
                                        {derive_seed(kSeed, 5000 + r),
                                         derive_seed(kSeed, 9000 + r)},
                                        {0, false});
        totals.push_back(tr.final_time);
    }
    const double mc_mean = mean(totals);
    const double ci = 1.96 * standard_error(totals);

    const ConsecutiveBound b1 = shifted_exp_consecutive_bound(1.0, 1.0, 2, 8);
    const ConsecutiveBound b5 = shifted_exp_consecutive_bound(5.0, 1.0, 2, 8);
    const double sync4 = 4.0 * (5.0 + harmonic_number(8) - harmonic_number(6));
    const double worst = std::max(mc_mean - (b1.total + 3.0 * ci), b5.total - sync4);
    const bool pass = mc_mean <= b1.total + 3.0 * ci && b5.total < sync4;
    return finish(5, "consecutive-async-refinement", pass, worst, 0.0, 0.0, 120.0, t0,
                  "mc " + fmt(mc_mean) + " <= bound " + fmt(b1.total) + " (+3ci " + fmt(ci) +
                      "); setup-cost-5 bound " + fmt(b5.total) + " < sync " + fmt(sync4));
}

// 6. Fresh-gradient probability sits at 1/P for memoryless delays and on the
//    predicted side of 1/P for the aging classes.
CriterionResult criterion_fresh_probability() {
    const auto t0 = Clock::now();
    const long updates = 100000;
    const auto run_p0 = [&](const DelayDistribution& d, std::uint64_t idx) {
        const VariantConfig cfg{Variant::KAsync, 1, 8, 1, 0.1};
        const Trace tr = run_simulation(cfg, d, nullptr, Eigen::VectorXd(),
                                        Horizon::iterations(updates),
                                        {derive_seed(kSeed, 600 + idx),
                                         derive_seed(kSeed, 650 + idx)},
                                        {0, false});
        return empirical_p0(tr);
    };
    const double p_exp = run_p0(Exponential(1.0), 0);
    const double p_shift = run_p0(ShiftedExponential(1.0, 1.0), 1);
    const double p_hyper = run_p0(HyperExponential({0.9, 0.1}, {2.0, 0.4}), 2);
    const double se = std::sqrt(0.125 * 0.875 / static_cast<double>(updates));
    const double worst = std::max({std::abs(p_exp - 0.125) - 3.0 * se,
                                   p_shift - 0.125 - 3.0 * se,
                                   0.125 - 3.0 * se - p_hyper});
    return finish(6, "fresh-gradient-probability", worst <= 0.0, worst, 0.0, 0.0, 60.0, t0,
                  "exp " + fmt(p_exp) + " ~ 1/8, shifted " + fmt(p_shift) + " <=, hyper " +
                      fmt(p_hyper) + " >= (3se " + fmt(3.0 * se) + ")");
}

// 7. With a shared data stream, K-sync reproduces serial mini-batch SGD
//    bit for bit.
CriterionResult criterion_serial_equivalence() {
    const auto t0 = Clock::now();
    const Testbed tb;
    const auto& q = std::get<Quadratic>(tb.objective);

    const int k = 4;
    const int m = 2;
    const double eta = 0.05;
    const long iters = 1000;
    const Seeds seeds{derive_seed(kSeed, 700), derive_seed(kSeed, 701)};

    const GradientOracle oracle{&tb.objective, AdditiveGaussian{1.0}, m};
    const VariantConfig cfg{Variant::KSync, k, 8, m, eta};
    SimulationOptions opts;
    opts.loss_cadence = 0;
    opts.store_parameters = true;
    const Trace tr = run_simulation(cfg, Exponential(1.0), &oracle, tb.w0,
                                    Horizon::iterations(iters), seeds, opts);

    // serial reference: same data stream, K scaled mini-batch draws per step
    RngStream data(seeds.data);
    const Eigen::Index dim = tb.w0.size();
    const double scale = std::sqrt(1.0 / (static_cast<double>(m) * static_cast<double>(dim)));
    Eigen::VectorXd w = tb.w0;
    long mismatches = 0;
    for (long j = 0; j < iters; ++j) {
        const Eigen::VectorXd base = q.eigenvalues.cwiseProduct(w - q.w_star);
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
        for (int c = 0; c < k; ++c) {
            Eigen::VectorXd g(dim);
            for (Eigen::Index i = 0; i < dim; ++i) g[i] = base[i] + scale * data.normal();
            acc += g;
        }
        const double step = eta / static_cast<double>(k);
        w -= step * acc;
        const Eigen::VectorXd& sim_w = tr.parameters[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < dim; ++i)
            if (w[i] != sim_w[i]) ++mismatches;
    }
    return finish(7, "sync-serial-equivalence", mismatches == 0,
                  static_cast<double>(mismatches), 0.0, 0.0, 30.0, t0,
                  std::to_string(mismatches) + " coefficient mismatches over " +
                      std::to_string(iters) + " updates (must be 0)");
}

// 8. Steady-state excess loss lands under eta*L*sigma^2/(2cKm) with headroom
//    and falls monotonically with K.
CriterionResult criterion_error_floor() {
    const auto t0 = Clock::now();
    const Testbed tb;
    const double eta = 0.05;
    double worst = -kInf;  // positive = a floor cap or monotonicity violation
    std::vector<double> medians;
    std::ostringstream detail;
    detail << std::setprecision(3) << "median floors";
    for (int k : {1, 2, 4, 8}) {
        std::vector<double> floors;
        for (int s = 0; s < 20; ++s) {
            const VariantConfig cfg{Variant::KSync, k, 8, 1, eta};
            const Trace tr = run_simulation(cfg, Exponential(1.0), &tb.oracle, tb.w0,
                                            Horizon::iterations(2000),
                                            {derive_seed(kSeed, 800 + 100 * k + s),
                                             derive_seed(kSeed, 1800 + 100 * k + s)},
                                            {1, false});
            floors.push_back(trailing_excess(tr, tb.f_star));
        }
        const double med = median(floors);
        const double cap = 1.1 * eta * 4.0 * 1.0 / (2.0 * 1.0 * k * 1.0);
        worst = std::max(worst, med - cap);
        detail << " K=" << k << ": " << med << " (cap " << cap << ")";
        medians.push_back(med);
    }
    bool monotone = true;
    for (std::size_t i = 1; i < medians.size(); ++i) {
        monotone = monotone && medians[i] < medians[i - 1];
        worst = std::max(worst, medians[i] - medians[i - 1]);
    }
    return finish(8, "sync-error-floor", worst <= 0.0 && monotone, worst, 0.0, 0.0, 120.0,
                  t0, detail.str());
}

// 9 + 10. Async convergence bound with measured staleness constants, and the
// matching ergodic gradient-norm bound, evaluated on the same runs.
void criteria_async_bounds(std::vector<CriterionResult>& out) {
    const auto t0 = Clock::now();
    const Testbed tb;
    const double eta = 0.05;
    const long total_updates = 2000;

    bool ok_curve = true;
    bool ok_ergodic = true;
    double worst_curve = -kInf;    // mean excess minus bound, maximized over j
    double worst_ergodic = -kInf;  // avg ||grad||^2 minus bound
    std::ostringstream d9;
    std::ostringstream d10;
    d9 << std::setprecision(3);
    d10 << std::setprecision(3);

    for (int k : {1, 4}) {
        std::vector<double> gammas, p0s, grad_avgs;
        std::vector<std::vector<double>> losses;  // [seed][update]
        for (int s = 0; s < 20; ++s) {
            const VariantConfig cfg{Variant::KAsync, k, 8, 1, eta};
            SimulationOptions opts;
            opts.loss_cadence = 1;
            opts.store_parameters = true;
            const Trace tr = run_simulation(cfg, Exponential(1.0), &tb.oracle, tb.w0,
                                            Horizon::iterations(total_updates),
                                            {derive_seed(kSeed, 3000 + 100 * k + s),
                                             derive_seed(kSeed, 4000 + 100 * k + s)},
                                            opts);
            gammas.push_back(empirical_gamma(tr, tb.objective));
            p0s.push_back(empirical_p0(tr));
            std::vector<double> row;
            std::vector<double> grads;
            row.reserve(tr.records.size());
            for (const auto& r : tr.records) {
                row.push_back(r.loss);
                if (std::isfinite(r.grad_norm_sq)) grads.push_back(r.grad_norm_sq);
            }
            losses.push_back(std::move(row));
            grad_avgs.push_back(mean(grads));
        }
        const double gbar = mean(gammas);
        const double p0bar = mean(p0s);

        BoundInputs b;
        b.learning_rate = eta;
        b.strong_convexity = strong_convexity(tb.objective);
        b.smoothness = smoothness(tb.objective);
        b.sigma_sq = 1.0;
        b.relative_variance = 0.0;
        b.wait_count = k;
        b.minibatch_size = 1;
        b.staleness_gamma = gbar;
        b.fresh_prob = p0bar;
        b.initial_gap = tb.gap;
        // At this testbed K=1 measures a staleness ratio well above 1 for every
        // delay family (stale and current gradients decorrelate: contraction per
        // step at the stiffest eigenvalue is 1 - eta*L = 0.8 while mean staleness
        // is P-1 = 7, so the drift term approaches twice the reference).  The
        // bound's premise gamma <= 1 then fails and the inputs are rejected; the
        // criterion reports that honestly instead of clamping the measurement.
        try {
            b.validate();
        } catch (const std::invalid_argument& e) {
            ok_curve = false;
            ok_ergodic = false;
            worst_curve = std::max(worst_curve, gbar - 1.0);
            worst_ergodic = std::max(worst_ergodic, gbar - 1.0);
            d9 << " K=" << k << ": measured gamma " << gbar << " (p0 " << p0bar
               << ") breaks the premise gamma <= 1 — bound inapplicable";
            d10 << " K=" << k << ": gamma " << gbar << " > 1, bound inapplicable";
            continue;
        }

        std::size_t recorded = static_cast<std::size_t>(total_updates);
        for (const auto& row : losses) recorded = std::min(recorded, row.size());
        long violations = 0;
        for (std::size_t j = 0; j < recorded; ++j) {
            double acc = 0.0;
            for (const auto& row : losses) acc += row[j];
            const double mean_excess = acc / static_cast<double>(losses.size()) - tb.f_star;
            const double gap = mean_excess - kasync_error_bound(static_cast<long>(j) + 1, b).value;
            worst_curve = std::max(worst_curve, gap);
            if (gap > 0.0) ++violations;
        }
        ok_curve = ok_curve && violations == 0;
        d9 << " K=" << k << ": gamma " << gbar << ", p0 " << p0bar << ", " << violations
           << " violations/" << recorded;

        const double avg_grad = mean(grad_avgs);
        const double ergodic = nonconvex_ergodic_bound(total_updates, b).value;
        worst_ergodic = std::max(worst_ergodic, avg_grad - ergodic);
        ok_ergodic = ok_ergodic && avg_grad <= ergodic;
        d10 << " K=" << k << ": avg ||grad||^2 " << avg_grad << " <= " << ergodic;
    }

    out.push_back(finish(9, "async-error-bound-curve", ok_curve, worst_curve, 0.0, 0.0,
                         180.0, t0, d9.str()));
    CriterionResult ten = finish(10, "ergodic-gradient-bound", ok_ergodic, worst_ergodic,
                                 0.0, 0.0, 0.0, t0, d10.str());
    ten.seconds = 0.0;  // shares criterion 9's runs
    out.push_back(std::move(ten));
}

// 11. Closed-form controller rules agree with brute-force minimization of the
//     runtime-normalized error objective they are derived from.
CriterionResult criterion_controller_rules() {
    const auto t0 = Clock::now();
    int worst_gap = 0;
    int cells = 0;
    for (Variant v : {Variant::KSync, Variant::KBatchSync, Variant::KAsync,
                      Variant::KBatchAsync}) {
        const bool log_model = v == Variant::KSync;
        for (int p : {8, 16, 64}) {
            const std::set<int> k0s = {1, 2, p / 4};
            for (int k0 : k0s) {
                if (k0 < 1 || k0 >= p) continue;
                for (double r : {1.0, 2.0, 4.0, 16.0, 64.0}) {
                    AdaSyncConfig cfg;
                    cfg.variant = v;
                    cfg.initial_wait_count = k0;
                    cfg.num_workers = p;
                    cfg.slot_length = 1.0;
                    cfg.learning_rate = 0.05;
                    const int closed = next_wait_count(cfg, 1.0, 1.0 / r, k0);

                    // anchor loss making K0 the continuous optimum, unit constants
                    const double f0 = log_model ? (p - k0) / (2.0 * k0 * k0)
                                                : 1.0 / (2.0 * k0 * k0);
                    const double fs = f0 / r;
                    int best = 1;
                    double best_u = kInf;
                    for (int k = 1; k <= p; ++k) {
                        if (log_model && k == p) continue;
                        const double et =
                            log_model ? std::log(static_cast<double>(p) / (p - k))
                                      : static_cast<double>(k);
                        const double u = objective_u(k, fs, et, 1.0, 1.0, 1.0, 1.0, 1.0, 1);
                        if (u < best_u) {
                            best_u = u;
                            best = k;
                        }
                    }
                    worst_gap = std::max(worst_gap, std::abs(closed - best));
                    ++cells;
                }
            }
        }
    }
    return finish(11, "controller-rule-optimality", worst_gap <= 1,
                  static_cast<double>(worst_gap), 0.0, 1.0, 5.0, t0,
                  "largest |closed - brute| " + std::to_string(worst_gap) + " over " +
                      std::to_string(cells) + " cells (must be <= 1)");
}

// 12. The controller matches the fixed high-K floor while getting there at
//     least as fast, per simulated wallclock.
CriterionResult criterion_controller_end_to_end() {
    const auto t0 = Clock::now();
    const Testbed tb;
    const DelayDistribution dist = Exponential(1.0);
    const Horizon budget = Horizon::sim_time(600.0);
    SimulationOptions opts;
    opts.loss_cadence = 1;
    opts.store_parameters = false;

    std::vector<double> fixed_floors, ada_floors;
    std::vector<Trace> fixed_traces, ada_traces;
    for (int s = 0; s < 20; ++s) {
        const Seeds seeds{derive_seed(kSeed, 13000 + s), derive_seed(kSeed, 13100 + s)};
        const VariantConfig fixed_cfg{Variant::KAsync, 8, 8, 1, 0.05};
        Trace fixed = run_simulation(fixed_cfg, dist, &tb.oracle, tb.w0, budget, seeds, opts);
        fixed_floors.push_back(trailing_excess(fixed, tb.f_star));
        fixed_traces.push_back(std::move(fixed));

        AdaSyncConfig acfg;
        acfg.variant = Variant::KAsync;
        acfg.initial_wait_count = 1;
        acfg.num_workers = 8;
        acfg.slot_length = 20.0;
        acfg.minibatch_size = 1;
        acfg.learning_rate = 0.05;
        AdaSyncRun ada = run_adasync(acfg, dist, &tb.oracle, tb.w0, budget, seeds, opts);
        ada_floors.push_back(trailing_excess(ada.trace, tb.f_star));
        ada_traces.push_back(std::move(ada.trace));
    }

    const double fixed_floor = median(fixed_floors);
    const double threshold = 2.0 * fixed_floor;
    std::vector<double> fixed_cross, ada_cross;
    for (int s = 0; s < 20; ++s) {
        fixed_cross.push_back(
            first_crossing(fixed_traces[static_cast<std::size_t>(s)], tb.f_star, threshold));
        ada_cross.push_back(
            first_crossing(ada_traces[static_cast<std::size_t>(s)], tb.f_star, threshold));
    }
    const double t_fixed = median(fixed_cross);
    const double t_ada = median(ada_cross);
    const double ada_floor = median(ada_floors);
    const double worst = std::max(t_ada - t_fixed, ada_floor - 1.1 * fixed_floor);
    const bool pass = t_ada <= t_fixed && ada_floor <= 1.1 * fixed_floor;
    return finish(12, "controller-end-to-end", pass, worst, 0.0, 0.0, 300.0, t0,
                  "time to 2x floor: adaptive " + fmt(t_ada) + "s vs fixed " + fmt(t_fixed) +
                      "s; floors " + fmt(ada_floor) + " vs cap " + fmt(1.1 * fixed_floor));
}

// 13. Speedup curves rise with P for every delay family, exactly P * H_P in
//     the memoryless case.
CriterionResult criterion_speedup_trend() {
    const auto t0 = Clock::now();
    const std::vector<DelayDistribution> dists = {Exponential(1.0),
                                                  ShiftedExponential(1.0, 1.0),
                                                  Pareto(2.0, 1.0)};
    const std::vector<int> ps = {2, 4, 8, 16, 32};
    const auto points = speedup_curve(dists, ps, 200000, derive_seed(kSeed, 14000));
    bool pass = true;
    double worst = -kInf;
    for (std::size_t d = 0; d < dists.size(); ++d) {
        for (std::size_t i = 0; i < ps.size(); ++i) {
            const auto& pt = points[d * ps.size() + i];
            if (i > 0) {
                const double prev = points[d * ps.size() + i - 1].log_speedup;
                pass = pass && pt.log_speedup > prev;
                worst = std::max(worst, prev - pt.log_speedup);
            }
            if (d == 0) {
                const double expected = ps[i] * harmonic_number(ps[i]);
                const double err = std::abs(std::exp(pt.log_speedup) - expected) / expected;
                pass = pass && err <= 1e-9;
                worst = std::max(worst, err - 1e-9);
            }
        }
    }
    return finish(13, "speedup-curve-trend", pass, worst, 0.0, 0.0, 30.0, t0,
                  "monotone over P in {2,...,32} for 3 delay families; memoryless curve "
                  "matches P*H_P to 1e-9");
}

}  // namespace

std::vector<CriterionResult> run_acceptance() {
    std::vector<CriterionResult> out;
    out.push_back(criterion_sync_order_stats());
    out.push_back(criterion_speedup_ratio());
    out.push_back(criterion_renewal_rate());
    out.push_back(criterion_runtime_upper_bounds());
    out.push_back(criterion_consecutive_bound());
    out.push_back(criterion_fresh_probability());
    out.push_back(criterion_serial_equivalence());
    out.push_back(criterion_error_floor());
    criteria_async_bounds(out);
    out.push_back(criterion_controller_rules());
    out.push_back(criterion_controller_end_to_end());
    out.push_back(criterion_speedup_trend());
    return out;
}

bool report_acceptance(const std::vector<CriterionResult>& results, std::ostream& out) {
    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass;
        std::ostringstream line;
        line << (r.pass ? "PASS" : "FAIL") << "  [" << std::setw(2) << r.id << "/13] "
             << std::left << std::setw(30) << r.name << std::right << std::fixed
             << std::setprecision(1) << std::setw(6) << r.seconds << "s";
        if (r.limit_seconds > 0.0) line << " / " << r.limit_seconds << "s";
        out << line.str() << "  " << r.details << "\n";
    }
    out << (all ? "acceptance: 13/13 criteria passed" : "acceptance: FAILURES present")
        << "\n";
    return all;
}

void write_acceptance_csv(const std::vector<CriterionResult>& results, std::ostream& out) {
    out << "id,name,measured,expected,tolerance,pass,seconds,limit_seconds\n";
    for (const auto& r : results) {
        out << r.id << ',' << r.name << ',' << format_sig9(r.measured) << ','
            << format_sig9(r.expected) << ',' << format_sig9(r.tolerance) << ','
            << (r.pass ? "true" : "false") << ',' << format_sig9(r.seconds) << ','
            << format_sig9(r.limit_seconds) << "\n";
    }
}

}  // namespace staleracer
