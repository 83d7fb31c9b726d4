#pragma once

#include <cstdint>
#include <cstddef>

#include "staleracer/delay_model.hpp"

namespace staleracer {

// H_n = 1 + 1/2 + ... + 1/n; H_0 = 0
double harmonic_number(int n);

// Expected value of the K-th smallest of P i.i.d. draws, in closed form.
// Supported: Exponential, ShiftedExponential, Pareto. Throws
// UnsupportedClosedForm for HyperExponential and InvalidRank for bad (K, P).
double expected_order_statistic(const DelayDistribution& dist, int k, int p);

struct OrderStatEstimate {
    double value;
    double std_error;
};

// Monte-Carlo estimate of E[X_{K:P}]. Samples may be split across independent
// streams; per-stream sums are combined so the result does not depend on
// stream evaluation order.
OrderStatEstimate mc_expected_order_statistic(const DelayDistribution& dist, int k, int p,
                                              std::size_t samples, std::uint64_t seed,
                                              std::size_t streams = 1);

}  // namespace staleracer
