#include "staleracer/error_bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace staleracer {

void BoundInputs::validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be > 0");
    if (!(strong_convexity > 0.0)) throw std::invalid_argument("c must be > 0");
    if (!(smoothness >= strong_convexity)) throw std::invalid_argument("need L >= c");
    if (!(sigma_sq >= 0.0)) throw std::invalid_argument("sigma_sq must be >= 0");
    if (!(relative_variance >= 0.0)) throw std::invalid_argument("M_G must be >= 0");
    if (wait_count < 1) throw std::invalid_argument("wait count must be >= 1");
    if (minibatch_size < 1) throw std::invalid_argument("minibatch size must be >= 1");
    if (!(staleness_gamma >= 0.0 && staleness_gamma <= 1.0))
        throw std::invalid_argument("gamma must be in [0,1]");
    if (!(fresh_prob >= 0.0 && fresh_prob <= 1.0))
        throw std::invalid_argument("p0 must be in [0,1]");
    if (!(initial_gap >= 0.0)) throw std::invalid_argument("initial gap must be >= 0");
    const double gp = contraction_modifier();
    if (!(gp > 0.0 && gp <= 1.5))
        throw std::invalid_argument("contraction modifier must be in (0, 1.5]");
}

static double geometric_decay(double base, long j) {
    if (j < 0) throw std::invalid_argument("iteration index must be >= 0");
    return std::pow(base, static_cast<double>(j));
}

BoundValue ksync_error_bound(long j, const BoundInputs& b) {
    b.validate();
    const double km = static_cast<double>(b.wait_count) * b.minibatch_size;
    const double floor = b.learning_rate * b.smoothness * b.sigma_sq /
                         (2.0 * b.strong_convexity * km);
    const double decay = geometric_decay(1.0 - b.learning_rate * b.strong_convexity, j);
    const bool ok = b.learning_rate <=
                    1.0 / (2.0 * b.smoothness * (b.relative_variance / km + 1.0));
    return {floor + decay * (b.initial_gap - floor), ok};
}

BoundValue kasync_error_bound(long j, const BoundInputs& b) {
    b.validate();
    const double gp = b.contraction_modifier();
    const double km = static_cast<double>(b.wait_count) * b.minibatch_size;
    const double floor = b.learning_rate * b.smoothness * b.sigma_sq /
                         (2.0 * b.strong_convexity * gp * km);
    const double decay =
        geometric_decay(1.0 - b.learning_rate * b.strong_convexity * gp, j);
    const bool ok = b.learning_rate <=
                    1.0 / (2.0 * b.smoothness *
                           (b.relative_variance / km + 1.0 / b.wait_count));
    return {floor + decay * (b.initial_gap - floor), ok};
}

BoundValue nonconvex_ergodic_bound(long total_iterations, const BoundInputs& b) {
    b.validate();
    if (total_iterations < 1) throw std::invalid_argument("need at least one iteration");
    const double gp = b.contraction_modifier();
    const double km = static_cast<double>(b.wait_count) * b.minibatch_size;
    const double transient = 2.0 * b.initial_gap /
                             (static_cast<double>(total_iterations) * b.learning_rate * gp);
    const double floor = b.smoothness * b.learning_rate * b.sigma_sq / (km * gp);
    const bool ok = b.learning_rate <=
                    1.0 / (2.0 * b.smoothness *
                           (b.relative_variance / km + 1.0 / b.wait_count));
    return {transient + floor, ok};
}

double max_learning_rate(Variant variant, const BoundInputs& b) {
    b.validate();
    if (is_synchronous(variant)) {
        const double km = static_cast<double>(b.wait_count) * b.minibatch_size;
        return std::max(1.0 / b.strong_convexity,
                        1.0 / (2.0 * b.smoothness * (b.relative_variance / km + 1.0)));
    }
    const double gp = b.contraction_modifier();
    return std::max(1.0 / (b.strong_convexity * gp),
                    1.0 / (2.0 * b.smoothness * (b.relative_variance / b.minibatch_size + 1.0)));
}

}  // namespace staleracer
