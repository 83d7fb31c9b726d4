#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "staleracer/delay_model.hpp"
#include "staleracer/runtime_analysis.hpp"

namespace staleracer {

// One analytic-vs-simulation runtime comparison.
struct VerifyRow {
    Variant variant;
    int wait_count;
    int num_workers;
    std::string dist_label;
    double analytic;
    RuntimeResult::Kind kind;
    double mc_mean;
    double mc_ci95;
    bool pass;  // Exact: |mc - analytic| <= 3 ci; UpperBound: mc <= analytic + 3 ci
};

// Sweeps the built-in grid (all four variants, the three closed-form delay
// families, P = 8) and checks every Monte-Carlo mean against its formula.
std::vector<VerifyRow> run_verify_suite(long iterations, std::uint64_t seed);

// columns: variant,K,P,dist,analytic,kind,mc_mean,mc_ci95,pass
void write_verify_csv(const std::vector<VerifyRow>& rows, std::ostream& out);

}  // namespace staleracer
