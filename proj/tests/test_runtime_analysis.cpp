#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "staleracer/errors.hpp"
#include "staleracer/order_statistics.hpp"
#include "staleracer/rng.hpp"
#include "staleracer/runtime_analysis.hpp"

using namespace staleracer;

namespace {

double harmonic_oracle(int n) {
    double h = 0.0;
    for (int i = 1; i <= n; ++i) h += 1.0 / i;
    return h;
}

VariantConfig cell(Variant v, int k, int p) { return {v, k, p, 1, 0.1}; }

}  // namespace

TEST_CASE("per-iteration runtimes: closed forms and exactness per variant") {
    const DelayDistribution exp1 = Exponential(1.0);
    const DelayDistribution shifted = ShiftedExponential(1.0, 1.0);
    const DelayDistribution pareto = Pareto(2.0, 1.0);

    auto r = expected_runtime(cell(Variant::KSync, 4, 8), exp1);
    CHECK(r.kind == RuntimeResult::Kind::Exact);
    CHECK(r.seconds == doctest::Approx(0.6345238095238095).epsilon(1e-14));
    CHECK_FALSE(r.assumptions.empty());

    // the k_sync barrier is an order statistic for any distribution
    CHECK(expected_runtime(cell(Variant::KSync, 2, 8), pareto).kind ==
          RuntimeResult::Kind::Exact);

    r = expected_runtime(cell(Variant::KBatchSync, 4, 8), exp1);
    CHECK(r.kind == RuntimeResult::Kind::Exact);
    CHECK(r.seconds == doctest::Approx(0.5).epsilon(1e-14));  // 4 * E[X_{1:8}]
    CHECK(expected_runtime(cell(Variant::KBatchSync, 4, 8), shifted).kind ==
          RuntimeResult::Kind::UpperBound);
    CHECK(expected_runtime(cell(Variant::KBatchSync, 4, 8), pareto).kind ==
          RuntimeResult::Kind::UpperBound);

    r = expected_runtime(cell(Variant::KAsync, 4, 8), exp1);
    CHECK(r.kind == RuntimeResult::Kind::Exact);
    CHECK(r.seconds == doctest::Approx(0.6345238095238095).epsilon(1e-14));
    CHECK(expected_runtime(cell(Variant::KAsync, 4, 8), shifted).kind ==
          RuntimeResult::Kind::UpperBound);

    for (const auto& d : {exp1, shifted, pareto}) {
        r = expected_runtime(cell(Variant::KBatchAsync, 2, 8), d);
        CHECK(r.kind == RuntimeResult::Kind::Exact);
        CHECK(r.seconds == doctest::Approx(2.0 * mean(d) / 8.0).epsilon(1e-14));
    }
}

TEST_CASE("runtime formulas reject what they cannot promise") {
    const DelayDistribution hyper = HyperExponential({0.9, 0.1}, {2.0, 0.4});
    CHECK_THROWS_AS(expected_runtime(cell(Variant::KSync, 2, 8), hyper),
                    UnsupportedClosedForm);
    CHECK_THROWS_AS(expected_runtime(cell(Variant::KBatchSync, 2, 8), hyper),
                    BoundInapplicable);
    CHECK_THROWS_AS(expected_runtime(cell(Variant::KAsync, 2, 8), hyper),
                    BoundInapplicable);
    // the renewal rate only needs a finite mean
    CHECK(expected_runtime(cell(Variant::KBatchAsync, 2, 8), hyper).seconds ==
          doctest::Approx(2.0 * 0.7 / 8.0).epsilon(1e-14));
    CHECK_THROWS_AS(expected_runtime(cell(Variant::KSync, 9, 8), Exponential(1.0)),
                    std::invalid_argument);
}

TEST_CASE("fully-sync over fully-async speedup") {
    const double h8 = harmonic_oracle(8);
    CHECK(speedup_sync_over_async(Exponential(1.0), 8) ==
          doctest::Approx(8.0 * h8).epsilon(1e-13));
    // the rate cancels
    CHECK(speedup_sync_over_async(Exponential(2.5), 8) ==
          doctest::Approx(8.0 * h8).epsilon(1e-13));
    CHECK(speedup_sync_over_async(ShiftedExponential(1.0, 1.0), 8) ==
          doctest::Approx(8.0 * (1.0 + h8) / 2.0).epsilon(1e-13));
    CHECK(speedup_sync_over_async(Pareto(2.0, 1.0), 8) ==
          doctest::Approx(8.0 * expected_order_statistic(Pareto(2.0, 1.0), 8, 8) / 2.0)
              .epsilon(1e-13));
    CHECK(speedup_sync_over_async(Exponential(1.0), 1) == doctest::Approx(1.0));

    const auto asym = speedup_exponential_asymptotic(8);
    CHECK(asym.exact == doctest::Approx(8.0 * h8).epsilon(1e-13));
    CHECK(asym.approximate == doctest::Approx(8.0 * std::log(8.0)).epsilon(1e-13));
}

TEST_CASE("k-async over k-batch-async runtime ratio: frozen values") {
    CHECK(kasync_over_kbatchasync_ratio(4, 8) ==
          doctest::Approx(533.0 / 420.0).epsilon(1e-14));
    CHECK(kasync_over_kbatchasync_ratio(7, 8) ==
          doctest::Approx(1.963265306122449).epsilon(1e-14));
    CHECK(kasync_over_kbatchasync_ratio(1, 1) == doctest::Approx(1.0));
    // always at least 1: waiting for the K-th arrival cannot beat the renewal rate
    for (int p : {2, 4, 8, 16})
        for (int k = 1; k <= p; ++k) CHECK(kasync_over_kbatchasync_ratio(k, p) >= 1.0 - 1e-12);
    CHECK_THROWS_AS(kasync_over_kbatchasync_ratio(9, 8), InvalidRank);
}

TEST_CASE("consecutive-iteration bound telescopes to one shift plus H_P") {
    const auto b = shifted_exp_consecutive_bound(1.0, 1.0, 2, 8);
    CHECK(b.iterations == 4);
    CHECK(b.total == doctest::Approx(1.0 + harmonic_oracle(8)).epsilon(1e-13));
    CHECK(b.total == doctest::Approx(3.717857142857143).epsilon(1e-13));
    CHECK(b.per_iteration_approx ==
          doctest::Approx(0.25 + 2.0 * std::log(8.0) / 8.0).epsilon(1e-13));

    // large setup cost: n consecutive async updates beat n synchronous barriers
    const auto big = shifted_exp_consecutive_bound(5.0, 1.0, 2, 8);
    CHECK(big.total == doctest::Approx(5.0 + harmonic_oracle(8)).epsilon(1e-13));
    const double sync_cost = 4.0 * (5.0 + harmonic_oracle(8) - harmonic_oracle(6));
    CHECK(big.total < sync_cost);

    CHECK_THROWS_AS(shifted_exp_consecutive_bound(1.0, 1.0, 3, 8), NotDivisible);
    CHECK_THROWS_AS(shifted_exp_consecutive_bound(1.0, 1.0, 8, 8), NotDivisible);
    CHECK(shifted_exp_consecutive_bound(1.0, 1.0, 2, 4).iterations == 2);
}

TEST_CASE("monte-carlo runtimes agree with the formulas") {
    const long iters = 20000;

    // exponential delays: every variant's value is exact
    for (Variant v : {Variant::KSync, Variant::KBatchSync, Variant::KAsync,
                      Variant::KBatchAsync}) {
        const auto cfg = cell(v, 2, 8);
        const double closed = expected_runtime(cfg, Exponential(1.0)).seconds;
        const auto mc = monte_carlo_runtime(cfg, Exponential(1.0), iters, derive_seed(5, 1));
        CHECK(mc.ci95 > 0.0);
        CHECK(std::abs(mc.mean_iteration_time - closed) <= 3.0 * mc.ci95);
    }

    // pareto renewal rate: mean time 0.5, push rate P/E[X] = 4
    const auto mc_pareto =
        monte_carlo_runtime(cell(Variant::KBatchAsync, 2, 8), Pareto(2.0, 1.0), 50000,
                            derive_seed(5, 2));
    CHECK(std::abs(mc_pareto.mean_iteration_time - 0.5) <= 3.0 * mc_pareto.ci95);
    CHECK(mc_pareto.push_rate == doctest::Approx(4.0).epsilon(0.02));

    // shifted-exponential k-async: one-sided upper bound
    const auto bound =
        expected_runtime(cell(Variant::KAsync, 2, 8), ShiftedExponential(1.0, 1.0));
    const auto mc_sh = monte_carlo_runtime(cell(Variant::KAsync, 2, 8),
                                           ShiftedExponential(1.0, 1.0), iters,
                                           derive_seed(5, 3));
    CHECK(mc_sh.mean_iteration_time <= bound.seconds + 3.0 * mc_sh.ci95);

    CHECK_THROWS_AS(
        monte_carlo_runtime(cell(Variant::KSync, 2, 8), Exponential(1.0), 50, 1),
        std::invalid_argument);
}
