#include "staleracer/verify.hpp"

#include <cmath>
#include <ostream>

#include "staleracer/csv.hpp"
#include "staleracer/rng.hpp"
#include "staleracer/sweep.hpp"

namespace staleracer {

std::vector<VerifyRow> run_verify_suite(long iterations, std::uint64_t seed) {
    const std::vector<DelayDistribution> dists = {
        Exponential(1.0), ShiftedExponential(1.0, 1.0), Pareto(2.0, 1.0)};

    struct Cell {
        Variant variant;
        int wait_count;
    };
    const std::vector<Cell> cells = {
        {Variant::KSync, 1},      {Variant::KSync, 4},      {Variant::KSync, 8},
        {Variant::KBatchSync, 2}, {Variant::KBatchSync, 4}, {Variant::KAsync, 2},
        {Variant::KAsync, 4},     {Variant::KBatchAsync, 2}, {Variant::KBatchAsync, 4}};
    constexpr int kWorkers = 8;

    std::vector<VerifyRow> rows;
    std::uint64_t job = 0;
    for (const auto& dist : dists) {
        for (const auto& cell : cells) {
            const VariantConfig cfg{cell.variant, cell.wait_count, kWorkers, 1, 0.1};
            const RuntimeResult analytic = expected_runtime(cfg, dist);
            const McRuntime mc =
                monte_carlo_runtime(cfg, dist, iterations, derive_seed(seed, job));

            VerifyRow row;
            row.variant = cell.variant;
            row.wait_count = cell.wait_count;
            row.num_workers = kWorkers;
            row.dist_label = label_distribution(dist);
            row.analytic = analytic.seconds;
            row.kind = analytic.kind;
            row.mc_mean = mc.mean_iteration_time;
            row.mc_ci95 = mc.ci95;
            row.pass = analytic.kind == RuntimeResult::Kind::Exact
                           ? std::abs(mc.mean_iteration_time - analytic.seconds) <= 3.0 * mc.ci95
                           : mc.mean_iteration_time <= analytic.seconds + 3.0 * mc.ci95;
            rows.push_back(std::move(row));
            ++job;
        }
    }
    return rows;
}

void write_verify_csv(const std::vector<VerifyRow>& rows, std::ostream& out) {
    out << "variant,K,P,dist,analytic,kind,mc_mean,mc_ci95,pass\n";
    for (const auto& r : rows) {
        out << variant_name(r.variant) << ',' << r.wait_count << ',' << r.num_workers << ','
            << r.dist_label << ',' << format_sig9(r.analytic) << ','
            << (r.kind == RuntimeResult::Kind::Exact ? "exact" : "upper_bound") << ','
            << format_sig9(r.mc_mean) << ',' << format_sig9(r.mc_ci95) << ','
            << (r.pass ? "true" : "false") << "\n";
    }
}

}  // namespace staleracer
