#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "staleracer/delay_model.hpp"
#include "staleracer/errors.hpp"
#include "staleracer/order_statistics.hpp"
#include "staleracer/rng.hpp"
#include "staleracer/statistics.hpp"

using namespace staleracer;

namespace {

// independent literal-loop oracles; the library must reproduce these

double harmonic_oracle(int n) {
    double h = 0.0;
    for (int i = 1; i <= n; ++i) h += 1.0 / i;
    return h;
}

// E[X_{k:p}] for Exponential(rate): sum of spacings 1/(rate*i), i = p-k+1..p
double exp_order_oracle(double rate, int k, int p) {
    double s = 0.0;
    for (int i = p - k + 1; i <= p; ++i) s += 1.0 / i;
    return s / rate;
}

// E[X_{k:p}] for Pareto(shape, scale): scale * prod_{i=p-k+1..p} i/(i - 1/shape)
double pareto_order_oracle(double shape, double scale, int k, int p) {
    double v = scale;
    for (int i = p - k + 1; i <= p; ++i) v *= static_cast<double>(i) / (i - 1.0 / shape);
    return v;
}

}  // namespace

TEST_CASE("harmonic numbers match frozen values and the literal sum") {
    CHECK(harmonic_number(0) == 0.0);
    CHECK(harmonic_number(1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(harmonic_number(4) == doctest::Approx(25.0 / 12.0).epsilon(1e-14));
    CHECK(harmonic_number(6) == doctest::Approx(2.45).epsilon(1e-14));
    CHECK(harmonic_number(8) == doctest::Approx(761.0 / 280.0).epsilon(1e-14));
    for (int n = 1; n <= 64; ++n)
        CHECK(harmonic_number(n) == doctest::Approx(harmonic_oracle(n)).epsilon(1e-13));
}

TEST_CASE("distribution means") {
    CHECK(mean(DelayDistribution(Exponential(2.0))) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(mean(DelayDistribution(ShiftedExponential(1.0, 1.0))) ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK(mean(DelayDistribution(Pareto(2.0, 1.0))) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(mean(DelayDistribution(HyperExponential({0.9, 0.1}, {2.0, 0.4}))) ==
          doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("survival functions at hand-computed points") {
    const double ln2 = std::log(2.0);
    CHECK(survival(Exponential(1.0), ln2) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(survival(ShiftedExponential(1.0, 1.0), 0.5) == doctest::Approx(1.0));
    CHECK(survival(ShiftedExponential(1.0, 1.0), 1.0 + ln2) ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(survival(Pareto(2.0, 1.0), 0.5) == doctest::Approx(1.0));
    CHECK(survival(Pareto(2.0, 1.0), 2.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(survival(HyperExponential({0.9, 0.1}, {2.0, 0.4}), 0.0) == doctest::Approx(1.0));
    CHECK(survival(HyperExponential({0.9, 0.1}, {2.0, 0.4}), 1.0) ==
          doctest::Approx(0.9 * std::exp(-2.0) + 0.1 * std::exp(-0.4)).epsilon(1e-14));
}

TEST_CASE("constructors reject bad parameters") {
    CHECK_THROWS_AS(Exponential(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ShiftedExponential(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ShiftedExponential(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Pareto(1.0, 1.0), std::invalid_argument);  // infinite mean
    CHECK_THROWS_AS(Pareto(2.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(HyperExponential({0.5}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(HyperExponential({0.5, 0.4}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(HyperExponential({0.5, 0.5}, {1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("exponential order statistics equal the harmonic-sum oracle") {
    for (int k = 1; k <= 8; ++k)
        CHECK(expected_order_statistic(Exponential(1.0), k, 8) ==
              doctest::Approx(exp_order_oracle(1.0, k, 8)).epsilon(1e-13));
    CHECK(expected_order_statistic(Exponential(0.5), 3, 5) ==
          doctest::Approx(exp_order_oracle(0.5, 3, 5)).epsilon(1e-13));
    CHECK(expected_order_statistic(Exponential(1.0), 1, 1) == doctest::Approx(1.0));
    // frozen spot values
    CHECK(expected_order_statistic(Exponential(1.0), 4, 8) ==
          doctest::Approx(0.6345238095238095).epsilon(1e-14));
    CHECK(expected_order_statistic(Exponential(1.0), 8, 8) ==
          doctest::Approx(2.717857142857143).epsilon(1e-14));
}

TEST_CASE("shifted-exponential order statistics add the shift") {
    for (int k = 1; k <= 8; ++k)
        CHECK(expected_order_statistic(ShiftedExponential(1.5, 2.0), k, 8) ==
              doctest::Approx(1.5 + exp_order_oracle(2.0, k, 8)).epsilon(1e-13));
}

TEST_CASE("pareto order statistics equal the gamma-ratio product oracle") {
    CHECK(expected_order_statistic(Pareto(2.0, 1.0), 1, 8) ==
          doctest::Approx(16.0 / 15.0).epsilon(1e-13));
    CHECK(expected_order_statistic(Pareto(2.0, 1.0), 2, 8) ==
          doctest::Approx(1.1487179487179487).epsilon(1e-13));
    for (int k = 1; k <= 8; ++k)
        CHECK(expected_order_statistic(Pareto(2.0, 1.0), k, 8) ==
              doctest::Approx(pareto_order_oracle(2.0, 1.0, k, 8)).epsilon(1e-12));
    for (int k = 1; k <= 4; ++k)
        CHECK(expected_order_statistic(Pareto(3.0, 2.0), k, 4) ==
              doctest::Approx(pareto_order_oracle(3.0, 2.0, k, 4)).epsilon(1e-12));
}

TEST_CASE("order statistics reject bad ranks and unsupported families") {
    CHECK_THROWS_AS(expected_order_statistic(Exponential(1.0), 0, 8), InvalidRank);
    CHECK_THROWS_AS(expected_order_statistic(Exponential(1.0), 9, 8), InvalidRank);
    CHECK_THROWS_AS(expected_order_statistic(Exponential(1.0), 1, 0), InvalidRank);
    CHECK_THROWS_AS(
        expected_order_statistic(HyperExponential({0.5, 0.5}, {1.0, 2.0}), 1, 2),
        UnsupportedClosedForm);
}

TEST_CASE("monte-carlo order statistics agree with the closed forms") {
    struct Cell {
        DelayDistribution dist;
        int k, p;
    };
    const Cell cells[] = {{Exponential(1.0), 4, 8},
                          {ShiftedExponential(1.0, 1.0), 2, 8},
                          {Pareto(2.0, 1.0), 2, 8}};
    int idx = 0;
    for (const auto& c : cells) {
        const double closed = expected_order_statistic(c.dist, c.k, c.p);
        for (std::size_t streams : {std::size_t{1}, std::size_t{4}}) {
            const auto est = mc_expected_order_statistic(c.dist, c.k, c.p, 200000,
                                                         derive_seed(42, ++idx), streams);
            CHECK(est.std_error > 0.0);
            CHECK(std::abs(est.value - closed) <= 4.0 * est.std_error);
        }
    }
}

TEST_CASE("sampling reproduces the distribution means") {
    const std::size_t n = 100000;
    struct Cell {
        DelayDistribution dist;
        double expected;
    };
    const Cell cells[] = {{Exponential(1.0), 1.0},
                          {ShiftedExponential(1.0, 1.0), 2.0},
                          {HyperExponential({0.9, 0.1}, {2.0, 0.4}), 0.7}};
    int idx = 0;
    for (const auto& c : cells) {
        RngStream rng(derive_seed(7, ++idx));
        std::vector<double> xs(n);
        for (auto& x : xs) x = sample(c.dist, rng);
        CHECK(std::abs(mean(xs) - c.expected) <= 5.0 * standard_error(xs));
        for (double x : xs) REQUIRE(x > 0.0);
    }
    // heavy tail: the sample variance is unreliable, use a fixed 5% band
    RngStream rng(derive_seed(7, 99));
    std::vector<double> xs(n);
    for (auto& x : xs) x = sample(DelayDistribution(Pareto(2.0, 1.0)), rng);
    CHECK(std::abs(mean(xs) - 2.0) <= 0.1);
    for (double x : xs) REQUIRE(x >= 1.0);  // support minimum
}

TEST_CASE("aging classes per family") {
    CHECK(classify_aging(Exponential(3.0)) == AgingClass::Memoryless);
    CHECK(classify_aging(ShiftedExponential(1.0, 1.0)) == AgingClass::NewLongerThanUsed);
    CHECK(classify_aging(ShiftedExponential(0.0, 2.0)) == AgingClass::Memoryless);
    CHECK(classify_aging(Pareto(2.0, 1.0)) == AgingClass::NewLongerThanUsed);
    CHECK(classify_aging(HyperExponential({0.9, 0.1}, {2.0, 0.4})) ==
          AgingClass::NewShorterThanUsed);
    CHECK(classify_aging(HyperExponential({0.5, 0.5}, {2.0, 2.0})) ==
          AgingClass::Memoryless);
    CHECK(aging_class_name(AgingClass::Memoryless) == "memoryless");
    CHECK(kind_name(DelayDistribution(Pareto(2.0, 1.0))) == "pareto");
}

TEST_CASE("survival multiplicativity matches the declared aging class") {
    const double grid[] = {0.25, 0.5, 1.0, 2.0, 4.0};
    const DelayDistribution exp_d = Exponential(1.3);
    const DelayDistribution nlu = ShiftedExponential(1.0, 1.0);
    const DelayDistribution nsu = HyperExponential({0.9, 0.1}, {2.0, 0.4});
    for (double t : grid) {
        for (double x : grid) {
            CHECK(survival(exp_d, t + x) ==
                  doctest::Approx(survival(exp_d, t) * survival(exp_d, x)).epsilon(1e-12));
            // new-longer-than-used: an in-flight task finishes sooner than a fresh one
            CHECK(survival(nlu, t + x) <= survival(nlu, t) * survival(nlu, x) + 1e-12);
            CHECK(survival(nsu, t + x) >= survival(nsu, t) * survival(nsu, x) - 1e-12);
        }
    }
    // the pareto support minimum guarantees the same inequality below the scale
    const DelayDistribution par = Pareto(2.0, 1.0);
    for (double t : {0.1, 0.3, 0.6, 1.0}) {
        for (double x : {0.1, 0.3, 0.6, 1.0}) {
            CHECK(survival(par, t + x) <= survival(par, t) * survival(par, x) + 1e-12);
        }
    }
}

TEST_CASE("fresh-gradient probability bounds follow the aging class") {
    const auto exact = p0_bound(Exponential(1.0), 8);
    CHECK(exact.kind == P0Bound::Kind::Exact);
    CHECK(exact.value == doctest::Approx(0.125));

    CHECK(p0_bound(ShiftedExponential(1.0, 1.0), 8).kind == P0Bound::Kind::Upper);
    CHECK(p0_bound(Pareto(2.0, 1.0), 8).kind == P0Bound::Kind::Upper);
    CHECK(p0_bound(HyperExponential({0.9, 0.1}, {2.0, 0.4}), 8).kind ==
          P0Bound::Kind::Lower);
    CHECK(p0_bound(Exponential(1.0), 1).value == doctest::Approx(1.0));
    CHECK_THROWS_AS(p0_bound(Exponential(1.0), 0), InvalidRank);
}
