#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "doctest.h"
#include "staleracer/config.hpp"
#include "staleracer/csv.hpp"
#include "staleracer/errors.hpp"
#include "staleracer/order_statistics.hpp"
#include "staleracer/sweep.hpp"
#include "staleracer/verify.hpp"

using namespace staleracer;

namespace {

const char* kFullConfig = R"json({
  "scenario": "harness-roundtrip",
  "variant": "k_async",
  "K": 3,
  "P": 8,
  "m": 2,
  "eta": 0.05,
  "dist": {"kind": "shifted_exponential", "shift": 1.0, "rate": 2.0},
  "objective": {"kind": "quadratic", "c": 1.0, "L": 4.0, "dim": 10},
  "noise": {"kind": "additive_gaussian", "sigma_sq": 1.0},
  "w0": {"kind": "excess", "gap": 50.0},
  "horizon": {"iterations": 400},
  "seeds": {"delay": 11, "data": 22},
  "loss_cadence": 5,
  "store_parameters": false,
  "grid": [
    {"variant": "k_sync", "K": 2},
    {"variant": "k_async", "K": 4}
  ],
  "replications": 3,
  "targets": [10.0, 2.0, 0.5],
  "adasync": {"K0": 2, "slot_length": 15.0, "rounding": "ceil", "monotone": false}
})json";

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

TEST_CASE("full config round trip preserves every field") {
    const ExperimentConfig cfg = parse_experiment_config(kFullConfig);

    CHECK(cfg.scenario == "harness-roundtrip");
    CHECK(cfg.variant == Variant::KAsync);
    CHECK(cfg.wait_count == 3);
    CHECK(cfg.num_workers == 8);
    CHECK(cfg.minibatch_size == 2);
    CHECK(cfg.learning_rate == 0.05);

    REQUIRE(std::holds_alternative<ShiftedExponential>(cfg.dist));
    const auto& se = std::get<ShiftedExponential>(cfg.dist);
    CHECK(se.shift == 1.0);
    CHECK(se.rate == 2.0);

    REQUIRE(std::holds_alternative<QuadraticSpectrumSpec>(cfg.objective));
    const auto& q = std::get<QuadraticSpectrumSpec>(cfg.objective);
    CHECK(q.c == 1.0);
    CHECK(q.l == 4.0);
    CHECK(q.dim == 10);

    REQUIRE(std::holds_alternative<AdditiveGaussian>(cfg.noise));
    CHECK(std::get<AdditiveGaussian>(cfg.noise).sigma_sq == 1.0);

    REQUIRE(std::holds_alternative<W0Excess>(cfg.w0));
    CHECK(std::get<W0Excess>(cfg.w0).gap == 50.0);

    CHECK(cfg.horizon.kind == Horizon::Kind::Iterations);
    CHECK(cfg.horizon.max_updates == 400);
    CHECK(cfg.seeds.delay == 11);
    CHECK(cfg.seeds.data == 22);
    CHECK(cfg.loss_cadence == 5);
    CHECK(cfg.store_parameters == false);

    REQUIRE(cfg.grid.size() == 2);
    CHECK(cfg.grid[0].variant == Variant::KSync);
    CHECK(cfg.grid[0].wait_count == 2);
    CHECK(cfg.grid[1].variant == Variant::KAsync);
    CHECK(cfg.grid[1].wait_count == 4);

    CHECK(cfg.replications == 3);
    REQUIRE(cfg.targets.size() == 3);
    CHECK(cfg.targets[1] == 2.0);

    REQUIRE(cfg.adasync.has_value());
    const AdaSyncConfig ada = cfg.adasync_config();
    CHECK(ada.initial_wait_count == 2);
    CHECK(ada.slot_length == 15.0);
    CHECK(ada.rounding == Rounding::Ceil);
    CHECK(ada.monotone == false);

    const VariantConfig vc = cfg.variant_config();
    CHECK(vc.variant == Variant::KAsync);
    CHECK(vc.wait_count == 3);
    CHECK(vc.num_workers == 8);
    CHECK(vc.minibatch_size == 2);
    CHECK(vc.learning_rate == 0.05);
}

TEST_CASE("defaults fill in when optional fields are omitted") {
    const ExperimentConfig cfg = parse_experiment_config(R"({
        "variant": "k_sync", "P": 4, "eta": 0.1,
        "dist": {"kind": "exponential", "rate": 1.0},
        "objective": {"kind": "quadratic", "eigenvalues": [1.0, 2.0]},
        "horizon": {"sim_time": 12.5}
    })");
    CHECK(cfg.wait_count == 1);
    CHECK(cfg.minibatch_size == 1);
    CHECK(std::holds_alternative<AdditiveGaussian>(cfg.noise));
    CHECK(std::holds_alternative<W0Zero>(cfg.w0));
    CHECK(cfg.horizon.kind == Horizon::Kind::SimTime);
    CHECK(cfg.horizon.max_time == 12.5);
    CHECK(cfg.loss_cadence == 1);
    CHECK(cfg.store_parameters == true);
    CHECK(cfg.replications == 1);
    CHECK(cfg.targets.empty());
    CHECK(!cfg.adasync.has_value());
    // single-cell grid defaults to the top-level variant
    REQUIRE(cfg.grid.size() == 1);
    CHECK(cfg.grid[0].variant == Variant::KSync);
    CHECK(cfg.grid[0].wait_count == 1);
    CHECK_THROWS_AS((void)cfg.adasync_config(), std::logic_error);
}

TEST_CASE("every field problem is reported at once, not just the first") {
    // four independent mistakes: missing variant/eta, a bad distribution
    // kind, and non-decreasing targets
    try {
        parse_experiment_config(R"({
            "P": 8,
            "dist": {"kind": "weibull", "shape": 1.0},
            "objective": {"kind": "quadratic", "c": 1.0, "L": 4.0, "dim": 2},
            "horizon": {"iterations": 10},
            "targets": [1.0, 5.0]
        })");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.problems.size() >= 4);
        int missing = 0, dist_bad = 0, targets_bad = 0;
        for (const auto& p : e.problems) {
            if (p.find("missing") != std::string::npos) ++missing;
            if (p.rfind("dist:", 0) == 0) ++dist_bad;
            if (p.rfind("targets:", 0) == 0) ++targets_bad;
        }
        CHECK(missing >= 2);  // variant and eta
        CHECK(dist_bad == 1);
        CHECK(targets_bad == 1);
    }
}

TEST_CASE("cross-field validation runs once fields parse") {
    // K > P is only detectable after both fields are in hand
    try {
        parse_experiment_config(R"({
            "variant": "k_sync", "K": 9, "P": 8, "eta": 0.1,
            "dist": {"kind": "exponential", "rate": 1.0},
            "objective": {"kind": "quadratic", "c": 1.0, "L": 4.0, "dim": 2},
            "horizon": {"iterations": 10}
        })");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(e.problems.size() == 1);
        CHECK(e.problems[0].rfind("variant config:", 0) == 0);
    }

    // malformed JSON surfaces as a single parse problem
    CHECK_THROWS_AS(parse_experiment_config("{ nope"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("[1,2,3]"), ConfigError);
}

TEST_CASE("distribution JSON round trips through its tagged form") {
    const std::vector<DelayDistribution> dists = {
        Exponential(1.5), ShiftedExponential(0.5, 2.0), Pareto(2.5, 1.25),
        HyperExponential({0.9, 0.1}, {2.0, 0.25})};
    for (const auto& d : dists) {
        const DelayDistribution back = parse_distribution(distribution_to_json(d));
        CHECK(back.index() == d.index());
        CHECK(mean(back) == doctest::Approx(mean(d)).epsilon(1e-12));
        CHECK(survival(back, 0.7) == doctest::Approx(survival(d, 0.7)).epsilon(1e-12));
    }

    // malformed JSON text is wrapped; a well-formed record with an unknown
    // kind falls through as the raw argument error
    CHECK_THROWS_AS(parse_distribution("{ not json"), ConfigError);
    CHECK_THROWS_AS(parse_distribution(R"({"kind": "uniform", "a": 0.0})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_distribution(R"(["kind"])"), std::invalid_argument);
}

TEST_CASE("distribution argument accepts inline JSON or a file path") {
    const DelayDistribution inline_dist =
        distribution_from_arg(R"({"kind": "pareto", "shape": 2.0, "scale": 1.0})");
    CHECK(std::holds_alternative<Pareto>(inline_dist));

    const std::string path = "harness_dist_arg.json";
    {
        std::ofstream out(path);
        out << distribution_to_json(ShiftedExponential(1.0, 1.0));
    }
    const DelayDistribution from_file = distribution_from_arg(path);
    CHECK(std::holds_alternative<ShiftedExponential>(from_file));
    CHECK(mean(from_file) == doctest::Approx(2.0));
    std::remove(path.c_str());
}

TEST_CASE("starting points build against the objective") {
    const Objective quad = build_objective(QuadraticSpectrumSpec{1.0, 4.0, 6});

    const Eigen::VectorXd zero = build_w0(W0Zero{}, quad);
    CHECK(zero.size() == 6);
    CHECK(zero.norm() == 0.0);

    const Eigen::VectorXd fill = build_w0(W0Constant{2.0}, quad);
    CHECK(fill.minCoeff() == 2.0);
    CHECK(fill.maxCoeff() == 2.0);

    const Eigen::VectorXd expl =
        build_w0(W0Explicit{{1.0, 2.0, 3.0, 4.0, 5.0, 6.0}}, quad);
    CHECK(expl[5] == 6.0);
    CHECK_THROWS_AS(build_w0(W0Explicit{{1.0, 2.0}}, quad), DimensionMismatch);

    // the excess start lands exactly at the requested gap above the optimum
    const double gap = 17.0;
    const Eigen::VectorXd w0 = build_w0(W0Excess{gap}, quad);
    CHECK(full_loss(quad, w0) - optimal_value(quad) == doctest::Approx(gap).epsilon(1e-12));

    const Objective logit = build_objective(LogisticRecipeSpec{32, 4, 1.0, 5, 0.1});
    CHECK_THROWS_AS(build_w0(W0Excess{1.0}, logit), std::invalid_argument);
    CHECK(build_w0(W0Zero{}, logit).size() == 4);
}

TEST_CASE("objective recipes are deterministic and match their spec") {
    const Objective a = build_objective(LogisticRecipeSpec{64, 5, 1.0, 9, 0.05});
    const Objective b = build_objective(LogisticRecipeSpec{64, 5, 1.0, 9, 0.05});
    Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(5, -1.0, 1.0);
    CHECK(full_loss(a, w) == full_loss(b, w));
    CHECK((full_gradient(a, w) - full_gradient(b, w)).norm() == 0.0);

    const Objective q = build_objective(
        QuadraticExplicitSpec{{1.0, 3.0}, {2.0, -1.0}, 0.25});
    CHECK(optimal_value(q) == 0.25);
    Eigen::VectorXd at_star(2);
    at_star << 2.0, -1.0;
    CHECK(full_loss(q, at_star) == doctest::Approx(0.25));
}

TEST_CASE("nine significant digits survive the CSV formatter") {
    CHECK(format_sig9(0.5) == "0.5");
    CHECK(format_sig9(1.0 / 3.0) == "0.333333333");
    CHECK(format_sig9(1e-10) == "1e-10");
    CHECK(format_sig9(123456789.0) == "123456789");
    CHECK(format_sig9(1234567890.0) == "1.23456789e+09");
    CHECK(format_sig9(-2.5) == "-2.5");
    CHECK(format_sig9(0.0) == "0");
}

TEST_CASE("runtime verification grid agrees with the closed forms") {
    const std::vector<VerifyRow> rows = run_verify_suite(20000, 1);
    REQUIRE(rows.size() == 27);  // 3 delay families x 9 (variant, K) cells
    for (const auto& r : rows) {
        INFO(r.dist_label, " ", variant_name(r.variant), " K=", r.wait_count);
        CHECK(r.pass);
        CHECK(r.analytic > 0.0);
        CHECK(r.mc_ci95 > 0.0);
        CHECK(r.num_workers == 8);
    }

    std::ostringstream csv;
    write_verify_csv(rows, csv);
    const auto lines = split_lines(csv.str());
    REQUIRE(lines.size() == 28);
    CHECK(lines[0] == "variant,K,P,dist,analytic,kind,mc_mean,mc_ci95,pass");
    for (std::size_t i = 1; i < lines.size(); ++i)
        CHECK(split_fields(lines[i]).size() == 9);
}

TEST_CASE("error-runtime frontier sweep") {
    ExperimentConfig cfg;
    cfg.num_workers = 8;
    cfg.minibatch_size = 1;
    cfg.learning_rate = 0.05;
    cfg.dist = Exponential(1.0);
    cfg.objective = QuadraticSpectrumSpec{1.0, 4.0, 4};
    cfg.noise = AdditiveGaussian{1.0};
    cfg.w0 = W0Excess{20.0};
    cfg.horizon = Horizon::iterations(800);
    cfg.seeds = Seeds{101, 202};
    cfg.loss_cadence = 1;
    cfg.store_parameters = false;
    cfg.grid = {{Variant::KSync, 2},
                {Variant::KSync, 8},
                {Variant::KAsync, 2},
                {Variant::KAsync, 8}};
    cfg.replications = 5;
    cfg.targets = {5.0, 1.0};

    const std::vector<FrontierPoint> pts = sweep_tradeoff(cfg, 1);
    REQUIRE(pts.size() == 8);  // 4 cells x 2 targets

    // sorted by (K, variant order, target descending)
    const std::vector<int> want_k = {2, 2, 2, 2, 8, 8, 8, 8};
    const std::vector<Variant> want_v = {Variant::KSync,  Variant::KSync,
                                         Variant::KAsync, Variant::KAsync,
                                         Variant::KSync,  Variant::KSync,
                                         Variant::KAsync, Variant::KAsync};
    const std::vector<double> want_t = {5.0, 1.0, 5.0, 1.0, 5.0, 1.0, 5.0, 1.0};
    for (int i = 0; i < 8; ++i) {
        CHECK(pts[i].wait_count == want_k[i]);
        CHECK(pts[i].variant == want_v[i]);
        CHECK(pts[i].target == want_t[i]);
        CHECK(pts[i].replications == 5);
        CHECK(pts[i].unreached == 0);
        CHECK(std::isfinite(pts[i].median_time_to_target));
        CHECK(pts[i].median_time_to_target > 0.0);
        CHECK(pts[i].iqr_time_to_target >= 0.0);
        CHECK(pts[i].median_final_floor > 0.0);
    }

    // hitting the tighter target can only take longer
    for (int i = 0; i < 8; i += 2)
        CHECK(pts[i].median_time_to_target <= pts[i + 1].median_time_to_target);

    // larger K averages more gradients per update, so the noise floor drops
    auto floor_of = [&](Variant v, int k) {
        for (const auto& p : pts)
            if (p.variant == v && p.wait_count == k) return p.median_final_floor;
        FAIL("missing cell");
        return 0.0;
    };
    CHECK(floor_of(Variant::KSync, 8) < floor_of(Variant::KSync, 2));
    CHECK(floor_of(Variant::KAsync, 8) < floor_of(Variant::KAsync, 2));
    // at K = P the two disciplines run the same update, so floors agree in
    // order of magnitude
    const double ratio = floor_of(Variant::KSync, 8) / floor_of(Variant::KAsync, 8);
    CHECK(ratio > 0.5);
    CHECK(ratio < 2.0);

    // thread count must not change a single bit of the aggregate
    const std::vector<FrontierPoint> pts2 = sweep_tradeoff(cfg, 2);
    REQUIRE(pts2.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(pts2[i].variant == pts[i].variant);
        CHECK(pts2[i].wait_count == pts[i].wait_count);
        CHECK(pts2[i].target == pts[i].target);
        CHECK(pts2[i].median_time_to_target == pts[i].median_time_to_target);
        CHECK(pts2[i].iqr_time_to_target == pts[i].iqr_time_to_target);
        CHECK(pts2[i].median_final_floor == pts[i].median_final_floor);
        CHECK(pts2[i].iqr_final_floor == pts[i].iqr_final_floor);
        CHECK(pts2[i].unreached == pts[i].unreached);
    }

    std::ostringstream csv;
    write_frontier_csv(pts, csv);
    const auto lines = split_lines(csv.str());
    REQUIRE(lines.size() == 9);
    CHECK(lines[0] ==
          "variant,K,target,median_time_to_target,iqr_time_to_target,"
          "median_final_floor,iqr_final_floor,replications,unreached");
    CHECK(split_fields(lines[1])[0] == "k_sync");
    CHECK(split_fields(lines[3])[0] == "k_async");
    for (std::size_t i = 1; i < lines.size(); ++i)
        CHECK(split_fields(lines[i]).size() == 9);
}

TEST_CASE("frontier without targets reports the floor row only") {
    ExperimentConfig cfg;
    cfg.num_workers = 4;
    cfg.learning_rate = 0.05;
    cfg.dist = Exponential(1.0);
    cfg.objective = QuadraticSpectrumSpec{1.0, 4.0, 4};
    cfg.noise = AdditiveGaussian{1.0};
    cfg.w0 = W0Excess{5.0};
    cfg.horizon = Horizon::iterations(200);
    cfg.seeds = Seeds{7, 8};
    cfg.store_parameters = false;
    cfg.grid = {{Variant::KSync, 2}};
    cfg.replications = 2;

    const std::vector<FrontierPoint> pts = sweep_tradeoff(cfg, 1);
    REQUIRE(pts.size() == 1);
    CHECK(std::isnan(pts[0].target));
    CHECK(std::isnan(pts[0].median_time_to_target));
    CHECK(pts[0].median_final_floor > 0.0);
    CHECK(pts[0].unreached == 0);

    std::ostringstream csv;
    write_frontier_csv(pts, csv);
    const auto lines = split_lines(csv.str());
    REQUIRE(lines.size() == 2);
    const auto fields = split_fields(lines[1]);
    REQUIRE(fields.size() == 9);
    CHECK(fields[0] == "k_sync");
    CHECK(fields[1] == "2");
    CHECK(fields[2].empty());  // NaN target prints as an empty cell
    CHECK(fields[3].empty());
    CHECK(!fields[5].empty());
    CHECK(fields[7] == "2");
    CHECK(fields[8] == "0");
}

TEST_CASE("speedup curve mixes closed forms with Monte-Carlo fallback") {
    const std::vector<DelayDistribution> dists = {
        Exponential(1.0), Pareto(2.0, 1.0), HyperExponential({0.5, 0.5}, {1.0, 3.0})};
    const std::vector<int> p_values = {1, 2, 4};
    const std::vector<SpeedupPoint> pts = speedup_curve(dists, p_values, 20000, 77);
    REQUIRE(pts.size() == 9);

    for (int d = 0; d < 3; ++d) {
        for (int i = 0; i < 3; ++i) {
            const SpeedupPoint& p = pts[3 * d + i];
            CHECK(p.num_workers == p_values[i]);
            CHECK(p.dist_label.find(',') == std::string::npos);
            CHECK(std::isfinite(p.log_speedup));
        }
        // the fully-sync penalty grows with the worker count
        CHECK(pts[3 * d].log_speedup < pts[3 * d + 1].log_speedup);
        CHECK(pts[3 * d + 1].log_speedup < pts[3 * d + 2].log_speedup);
    }

    // exponential: speedup = P * H_P exactly
    CHECK(pts[0].closed_form);
    CHECK(pts[0].ci95 == 0.0);
    CHECK(pts[0].log_speedup == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(pts[1].log_speedup == doctest::Approx(std::log(2.0 * 1.5)).epsilon(1e-12));
    CHECK(pts[2].log_speedup ==
          doctest::Approx(std::log(4.0 * 25.0 / 12.0)).epsilon(1e-12));

    // Pareto has a closed-form maximum too
    CHECK(pts[3].closed_form);
    CHECK(std::abs(pts[3].log_speedup) < 1e-12);
    const double ratio4 =
        4.0 * expected_order_statistic(Pareto(2.0, 1.0), 4, 4) / mean(Pareto(2.0, 1.0));
    CHECK(pts[5].log_speedup == doctest::Approx(std::log(ratio4)).epsilon(1e-12));

    // hyper-exponential has no closed-form maximum; Monte Carlo with a CI
    for (int i = 6; i < 9; ++i) {
        CHECK(!pts[i].closed_form);
        CHECK(pts[i].ci95 > 0.0);
    }
    // P = 1 ratio is exactly 1, so the sampled log should sit near zero
    CHECK(std::abs(pts[6].log_speedup) < 0.05);

    std::ostringstream csv;
    write_speedup_csv(pts, csv);
    const auto lines = split_lines(csv.str());
    REQUIRE(lines.size() == 10);
    CHECK(lines[0] == "dist,P,log_speedup,method,ci95");
    for (std::size_t i = 1; i < lines.size(); ++i)
        CHECK(split_fields(lines[i]).size() == 5);
}
