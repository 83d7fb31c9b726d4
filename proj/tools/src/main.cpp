#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "staleracer/acceptance.hpp"
#include "staleracer/adasync.hpp"
#include "staleracer/config.hpp"
#include "staleracer/csv.hpp"
#include "staleracer/errors.hpp"
#include "staleracer/runtime_analysis.hpp"
#include "staleracer/simulator.hpp"
#include "staleracer/sweep.hpp"
#include "staleracer/trace.hpp"
#include "staleracer/verify.hpp"

namespace {

using namespace staleracer;

// "-" sends output to stdout; anything else is opened as a file
int with_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        return 0;
    }
    std::ofstream file(path);
    if (!file) {
        std::cerr << "error: cannot open output file '" << path << "'\n";
        return 1;
    }
    fn(file);
    return 0;
}

std::string csv_safe(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

struct GlobalArgs {
    std::string config_path;
    std::string out_path = "-";
    std::optional<std::uint64_t> seed;
    int jobs = 1;
};

// Loads and fully validates the config; a --seed override replaces both
// streams (delay = S, data = S + 1000003).
ExperimentConfig require_config(const GlobalArgs& g) {
    if (g.config_path.empty())
        throw ConfigError({"--config is required for this subcommand"});
    ExperimentConfig cfg = load_experiment_config(g.config_path);
    if (g.seed) cfg.seeds = Seeds{*g.seed, *g.seed + 1000003};
    return cfg;
}

std::vector<GridEntry> effective_grid(const ExperimentConfig& cfg) {
    if (!cfg.grid.empty()) return cfg.grid;
    return {GridEntry{cfg.variant, cfg.wait_count}};
}

int cmd_analyze(const GlobalArgs& g) {
    const ExperimentConfig cfg = require_config(g);
    return with_output(g.out_path, [&](std::ostream& os) {
        os << "variant,K,P,dist,expected_seconds,kind,assumptions,aging_class,"
              "p0_kind,p0_value\n";
        const std::string dist_label = label_distribution(cfg.dist);
        const std::string aging = aging_class_name(classify_aging(cfg.dist));
        const P0Bound p0 = p0_bound(cfg.dist, cfg.num_workers);
        const char* p0_kind = p0.kind == P0Bound::Kind::Exact   ? "exact"
                              : p0.kind == P0Bound::Kind::Upper ? "upper"
                                                                : "lower";
        for (const auto& cell : effective_grid(cfg)) {
            const VariantConfig vc{cell.variant, cell.wait_count, cfg.num_workers,
                                   cfg.minibatch_size, cfg.learning_rate};
            std::string seconds, kind, notes;
            try {
                const RuntimeResult r = expected_runtime(vc, cfg.dist);
                seconds = format_sig9(r.seconds);
                kind = r.kind == RuntimeResult::Kind::Exact ? "exact" : "upper_bound";
                notes = csv_safe(r.assumptions);
            } catch (const std::exception& e) {
                kind = "unavailable";
                notes = csv_safe(e.what());
            }
            os << variant_name(cell.variant) << ',' << cell.wait_count << ','
               << cfg.num_workers << ',' << dist_label << ',' << seconds << ',' << kind
               << ',' << notes << ',' << aging << ',' << p0_kind << ','
               << format_sig9(p0.value) << "\n";
        }
    });
}

int cmd_verify(const GlobalArgs& g, long iterations) {
    const auto rows = run_verify_suite(iterations, g.seed.value_or(1));
    const long failures =
        std::count_if(rows.begin(), rows.end(), [](const VerifyRow& r) { return !r.pass; });
    const int rc =
        with_output(g.out_path, [&](std::ostream& os) { write_verify_csv(rows, os); });
    std::cerr << "verify: " << rows.size() - failures << "/" << rows.size()
              << " rows consistent\n";
    return rc;
}

int cmd_simulate(const GlobalArgs& g) {
    const ExperimentConfig cfg = require_config(g);
    const Objective obj = build_objective(cfg.objective);
    const GradientOracle oracle{&obj, cfg.noise, cfg.minibatch_size};
    const Eigen::VectorXd w0 = build_w0(cfg.w0, obj);
    SimulationOptions opts;
    opts.loss_cadence = cfg.loss_cadence;
    opts.store_parameters = cfg.store_parameters;
    const Trace trace = run_simulation(cfg.variant_config(), cfg.dist, &oracle, w0,
                                       cfg.horizon, cfg.seeds, opts);
    const int rc = with_output(g.out_path,
                               [&](std::ostream& os) { write_trace_csv(trace, os); });
    std::cerr << "simulate: " << trace.records.size() << " updates, final time "
              << trace.final_time << (trace.diverged ? " (diverged)" : "") << "\n";
    return rc;
}

int cmd_adasync(const GlobalArgs& g) {
    const ExperimentConfig cfg = require_config(g);
    if (!cfg.adasync.has_value())
        throw ConfigError({"adasync subcommand needs an \"adasync\" block in the config"});
    const Objective obj = build_objective(cfg.objective);
    const GradientOracle oracle{&obj, cfg.noise, cfg.minibatch_size};
    const Eigen::VectorXd w0 = build_w0(cfg.w0, obj);
    SimulationOptions opts;
    opts.loss_cadence = cfg.loss_cadence;
    opts.store_parameters = cfg.store_parameters;
    const AdaSyncRun run = run_adasync(cfg.adasync_config(), cfg.dist, &oracle, w0,
                                       cfg.horizon, cfg.seeds, opts);
    const int rc = with_output(g.out_path, [&](std::ostream& os) {
        write_trace_csv(run.trace, os, /*controller_columns=*/true);
    });
    std::cerr << "adasync: final K=" << run.state.wait_count << " after "
              << run.state.slot_index << " slots"
              << (run.state.rule_extrapolated ? " (sqrt-rule fallback)" : "") << "\n";
    return rc;
}

int cmd_sweep(const GlobalArgs& g) {
    const ExperimentConfig cfg = require_config(g);
    const auto points = sweep_tradeoff(cfg, g.jobs);
    return with_output(g.out_path,
                       [&](std::ostream& os) { write_frontier_csv(points, os); });
}

int cmd_speedup(const GlobalArgs& g, const std::vector<std::string>& dist_args,
                const std::vector<int>& p_values, std::size_t samples) {
    std::vector<DelayDistribution> dists;
    if (dist_args.empty()) {
        dists = {Exponential(1.0), ShiftedExponential(1.0, 1.0), Pareto(2.0, 1.0)};
    } else {
        for (const auto& arg : dist_args) dists.push_back(distribution_from_arg(arg));
    }
    const auto points = speedup_curve(dists, p_values, samples, g.seed.value_or(1));
    return with_output(g.out_path,
                       [&](std::ostream& os) { write_speedup_csv(points, os); });
}

int cmd_accept(const GlobalArgs& g) {
    const auto results = run_acceptance();
    const bool all = report_acceptance(results, std::cout);
    if (!g.out_path.empty() && g.out_path != "-") {
        const int rc = with_output(g.out_path, [&](std::ostream& os) {
            write_acceptance_csv(results, os);
        });
        if (rc != 0) return rc;
    }
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"parameter-server straggler simulator and analysis toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalArgs g;
    app.add_option("--config", g.config_path, "experiment config (JSON)");
    app.add_option("--out", g.out_path, "output path; - for stdout")
        ->capture_default_str();
    std::uint64_t seed_value = 0;
    auto* seed_opt =
        app.add_option("--seed", seed_value,
                       "seed override: delay stream = S, data stream = S + 1000003");
    app.add_option("--jobs", g.jobs, "worker threads for sweep cells")
        ->check(CLI::PositiveNumber);

    auto* analyze = app.add_subcommand(
        "analyze", "closed-form runtime and staleness analysis for the config grid");
    long verify_iterations = 20000;
    auto* verify = app.add_subcommand(
        "verify", "Monte-Carlo consistency check of every runtime formula");
    verify->add_option("--iterations", verify_iterations, "simulated updates per cell")
        ->check(CLI::Range(100L, 100000000L))
        ->capture_default_str();
    auto* simulate =
        app.add_subcommand("simulate", "run one seeded simulation, emit the trace CSV");
    auto* adasync = app.add_subcommand(
        "adasync", "run the adaptive-K controller, emit the trace CSV with slot/K columns");
    auto* sweep =
        app.add_subcommand("sweep", "error-runtime frontier over the config grid");
    auto* speedup =
        app.add_subcommand("speedup", "sync-over-async speedup curve per delay family");
    std::vector<std::string> dist_args;
    speedup->add_option("--dist", dist_args,
                        "delay distribution, JSON or file (repeatable); default: the three "
                        "standard families");
    std::vector<int> p_values = {1, 2, 4, 8, 16, 32};
    speedup->add_option("-P,--workers", p_values, "worker counts")
        ->check(CLI::PositiveNumber);
    std::size_t samples = 200000;
    speedup->add_option("--samples", samples, "Monte-Carlo samples per point")
        ->capture_default_str();
    auto* accept = app.add_subcommand(
        "accept", "run every acceptance criterion; exit 0 only if all pass");

    CLI11_PARSE(app, argc, argv);
    if (seed_opt->count() > 0) g.seed = seed_value;

    try {
        if (analyze->parsed()) return cmd_analyze(g);
        if (verify->parsed()) return cmd_verify(g, verify_iterations);
        if (simulate->parsed()) return cmd_simulate(g);
        if (adasync->parsed()) return cmd_adasync(g);
        if (sweep->parsed()) return cmd_sweep(g);
        if (speedup->parsed()) return cmd_speedup(g, dist_args, p_values, samples);
        if (accept->parsed()) return cmd_accept(g);
    } catch (const ConfigError& e) {
        std::cerr << "config error:\n" << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
