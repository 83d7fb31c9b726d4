#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "staleracer/objective.hpp"
#include "staleracer/rng.hpp"

namespace staleracer {

// g = grad F(w) + z with z ~ N(0, (sigma_sq / (m*d)) I), so E||z||^2 = sigma_sq/m
struct AdditiveGaussian {
    double sigma_sq;
};

// average gradient over m data points sampled uniformly without replacement;
// only meaningful for objectives with a dataset
struct Subsampling {};

using NoiseModel = std::variant<AdditiveGaussian, Subsampling>;

struct GradientOracle {
    const Objective* objective;  // not owned
    NoiseModel noise;
    int minibatch_size;  // m

    GradientOracle(const Objective* objective, NoiseModel noise, int minibatch_size);
};

Eigen::VectorXd stochastic_gradient(const GradientOracle& oracle, const Eigen::VectorXd& w,
                                    RngStream& rng);

// One noisy gradient when grad F(w) is already known; avoids recomputing the
// full gradient per contribution in additive mode. Subsampling ignores `base`.
Eigen::VectorXd stochastic_gradient_from_base(const GradientOracle& oracle,
                                              const Eigen::VectorXd& w,
                                              const Eigen::VectorXd& base, RngStream& rng);

// Constants (sigma_sq, m_g) in the variance model
//   E||g - grad F(w)||^2 <= sigma_sq/m + m_g * ||grad F(w)||^2 / m.
struct VarianceConstants {
    double sigma_sq;
    double m_g;
    bool is_estimate;  // true when fitted empirically rather than known exactly
};

// Additive noise returns its exact constants. Subsampling fits the model by
// least squares of the mean squared deviation on ||grad F||^2 over the probe
// points (`draws` stochastic gradients at each), clamping both constants at 0.
VarianceConstants variance_constants(const GradientOracle& oracle,
                                     const std::vector<Eigen::VectorXd>& probe_points,
                                     int draws, std::uint64_t seed);

}  // namespace staleracer
