#pragma once

#include "staleracer/variant.hpp"

namespace staleracer {

// Constants entering the convergence bounds. `wait_count` is K, the number of
// gradients aggregated per update; in the fully synchronous forms it equals
// the worker count. The variance model is
//   E||g - grad F||^2 <= sigma_sq/m + relative_variance * ||grad F||^2 / m.
struct BoundInputs {
    double learning_rate;      // eta
    double strong_convexity;   // c
    double smoothness;         // L
    double sigma_sq;
    double relative_variance;  // M_G
    int wait_count;            // K
    int minibatch_size;        // m
    double staleness_gamma;    // gamma in [0,1]
    double fresh_prob;         // p0 in [0,1]
    double initial_gap;        // F(w0) - F*

    // 1 - gamma + p0/2; must land in (0, 1.5]
    double contraction_modifier() const { return 1.0 - staleness_gamma + fresh_prob / 2.0; }

    void validate() const;  // throws std::invalid_argument
};

struct BoundValue {
    double value;
    // false when the learning rate exceeds the admissible range for the bound;
    // the value is still the formula evaluated as given
    bool admissible;
};

// Expected excess loss after j synchronous updates:
//   floor + (1-eta*c)^j * (initial_gap - floor),  floor = eta*L*sigma_sq/(2*c*K*m).
// Admissible when eta <= 1/(2L(M_G/(Km)+1)).
BoundValue ksync_error_bound(long j, const BoundInputs& b);

// Same shape with every c replaced by c*gamma_prime:
//   floor + (1-eta*c*gamma_prime)^j * (initial_gap - floor),
//   floor = eta*L*sigma_sq/(2*c*gamma_prime*K*m).
// Admissible when eta <= 1/(2L(M_G/(Km)+1/K)).
BoundValue kasync_error_bound(long j, const BoundInputs& b);

// Bound on (1/J) sum_j E||grad F(w_j)||^2 without convexity:
//   2*initial_gap/(J*eta*gamma_prime) + L*eta*sigma_sq/(K*m*gamma_prime).
BoundValue nonconvex_ergodic_bound(long total_iterations, const BoundInputs& b);

// Largest admissible learning rate:
//   sync:  max{1/c, 1/(2L(M_G/(Km)+1))}
//   async: max{1/(c*gamma_prime), 1/(2L(M_G/m+1))}
double max_learning_rate(Variant variant, const BoundInputs& b);

}  // namespace staleracer
