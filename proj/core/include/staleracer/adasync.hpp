#pragma once

#include <cstdint>
#include <vector>

#include "staleracer/delay_model.hpp"
#include "staleracer/gradient_oracle.hpp"
#include "staleracer/simulator.hpp"
#include "staleracer/variant.hpp"

namespace staleracer {

enum class Rounding { Ceil, Nearest };

// Slot-based controller that grows K as the measured loss falls, trading
// early iteration speed for a low final error floor.
struct AdaSyncConfig {
    Variant variant;
    int initial_wait_count;  // K0
    int num_workers;         // P
    double slot_length;      // simulated seconds between re-evaluations
    Rounding rounding = Rounding::Nearest;
    bool monotone = true;    // forbid K decreases
    int minibatch_size = 1;
    double learning_rate;

    void validate() const;
};

// Runtime-normalized error bound driving the controller,
//   u(K) = 2 * F_start * expected_T / (t * eta * gamma_prime)
//        + L * eta * sigma_sq / (K * m * gamma_prime);
// the F* offset is dropped, matching the derivative the update rules come
// from. Exposed for diagnostics and brute-force minimization in tests.
double objective_u(int wait_count, double f_start, double expected_t, double slot_length,
                   double eta, double gamma_prime, double smoothness, double sigma_sq,
                   int minibatch_size);

// Closed-form minimizer of u(K) before rounding, per runtime model:
//   KSync:  positive root of K^2 + beta*K - beta*P = 0,
//           beta = (K0^2/(P-K0)) * (F0/F_start); the root lies in (0, P)
//   others: K0 * sqrt(F0/F_start)
// Throws NonPositiveLoss when f_start <= 0.
double next_wait_count_continuous(Variant variant, int k0, double f0, double f_start,
                                  int num_workers);

// Continuous rule, then rounding, clamping to [1, P] and the monotone floor.
int next_wait_count(const AdaSyncConfig& cfg, double f0, double f_start, int k_current);

struct AdaSyncDecision {
    int slot;
    double f_start;  // loss anchor used at this boundary
    int chosen_wait_count;
};

struct AdaSyncState {
    int wait_count;  // final K
    double f0;       // loss anchor fixed at training start
    int slot_index;
    std::vector<AdaSyncDecision> history;
    // true when the delay distribution is outside the exponential family the
    // update rules were derived for and the sqrt rule was used as fallback
    bool rule_extrapolated = false;
};

struct AdaSyncRun {
    Trace trace;
    AdaSyncState state;
};

// Runs the simulator under the controller. At every slot boundary (simulated
// wallclock) the full loss is evaluated, next_wait_count is applied (only
// while K < P, as in the controller's guard), and the new K takes effect at
// the next update without resetting in-flight work. Loss anchors are floored
// at 1e-12. Trace records carry (slot, K) annotations.
AdaSyncRun run_adasync(const AdaSyncConfig& cfg, const DelayDistribution& dist,
                       const GradientOracle* oracle, const Eigen::VectorXd& w0,
                       const Horizon& horizon, Seeds seeds, SimulationOptions opts = {});

}  // namespace staleracer
