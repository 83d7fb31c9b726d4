#include "staleracer/adasync.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "staleracer/errors.hpp"

namespace staleracer {

namespace {
constexpr double kLossFloor = 1e-12;
}

void AdaSyncConfig::validate() const {
    if (num_workers < 1 || num_workers > 64)
        throw std::invalid_argument("num_workers must be in [1, 64]");
    if (initial_wait_count < 1 || initial_wait_count > num_workers)
        throw std::invalid_argument("initial wait count must be in [1, num_workers]");
    if (!(slot_length > 0.0)) throw std::invalid_argument("slot_length must be > 0");
    if (minibatch_size < 1) throw std::invalid_argument("minibatch_size must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
}

double objective_u(int wait_count, double f_start, double expected_t, double slot_length,
                   double eta, double gamma_prime, double smoothness, double sigma_sq,
                   int minibatch_size) {
    if (wait_count < 1) throw InvalidRank("wait count must be >= 1");
    if (!(f_start > 0.0)) throw NonPositiveLoss("loss anchor must be > 0");
    if (!(expected_t > 0.0) || !(slot_length > 0.0) || !(eta > 0.0) ||
        !(gamma_prime > 0.0) || !(smoothness > 0.0) || !(sigma_sq >= 0.0) ||
        minibatch_size < 1)
        throw std::invalid_argument("objective_u needs positive inputs");
    return 2.0 * f_start * expected_t / (slot_length * eta * gamma_prime) +
           smoothness * eta * sigma_sq /
               (static_cast<double>(wait_count) * minibatch_size * gamma_prime);
}

double next_wait_count_continuous(Variant variant, int k0, double f0, double f_start,
                                  int num_workers) {
    if (num_workers < 1 || k0 < 1 || k0 > num_workers)
        throw InvalidRank("need 1 <= k0 <= num_workers");
    if (!(f_start > 0.0)) throw NonPositiveLoss("loss anchor must be > 0");
    if (!(f0 >= 0.0)) throw std::invalid_argument("initial loss must be >= 0");

    const double ratio = f0 / f_start;
    if (variant != Variant::KSync) return k0 * std::sqrt(ratio);

    if (k0 == num_workers) return static_cast<double>(num_workers);
    const double p = static_cast<double>(num_workers);
    const double beta = (static_cast<double>(k0) * k0 / (p - k0)) * ratio;
    // K^2 + beta*K - beta*P = 0; the positive root is below P because
    // u'(P) > 0 for any beta > 0
    return 0.5 * (-beta + std::sqrt(beta * beta + 4.0 * beta * p));
}

int next_wait_count(const AdaSyncConfig& cfg, double f0, double f_start, int k_current) {
    cfg.validate();
    const double k = next_wait_count_continuous(cfg.variant, cfg.initial_wait_count, f0,
                                                f_start, cfg.num_workers);
    double rounded =
        cfg.rounding == Rounding::Ceil ? std::ceil(k) : std::floor(k + 0.5);
    rounded = std::clamp(rounded, 1.0, static_cast<double>(cfg.num_workers));
    int out = static_cast<int>(rounded);
    if (cfg.monotone) out = std::max(out, k_current);
    return out;
}

AdaSyncRun run_adasync(const AdaSyncConfig& cfg, const DelayDistribution& dist,
                       const GradientOracle* oracle, const Eigen::VectorXd& w0,
                       const Horizon& horizon, Seeds seeds, SimulationOptions opts) {
    cfg.validate();
    if (oracle == nullptr)
        throw std::invalid_argument("the controller needs an objective to read losses from");

    // the update rules assume exponential-family delays; anything else falls
    // back to the sqrt rule and is flagged
    const bool exponential_family = std::holds_alternative<Exponential>(dist) ||
                                    std::holds_alternative<ShiftedExponential>(dist);
    AdaSyncConfig rule = cfg;
    if (!exponential_family) rule.variant = Variant::KAsync;  // sqrt rule

    VariantConfig vc;
    vc.variant = cfg.variant;
    vc.wait_count = cfg.initial_wait_count;
    vc.num_workers = cfg.num_workers;
    vc.minibatch_size = cfg.minibatch_size;
    vc.learning_rate = cfg.learning_rate;

    Simulator sim(vc, dist, oracle, w0, seeds, opts);

    AdaSyncState state;
    state.wait_count = cfg.initial_wait_count;
    state.f0 = std::max(sim.current_loss(), kLossFloor);
    state.slot_index = 0;
    state.rule_extrapolated = !exponential_family;

    while (sim.step(horizon)) {
        while (sim.now() >= (state.slot_index + 1) * cfg.slot_length) {
            ++state.slot_index;
            sim.set_slot(state.slot_index);
            if (state.wait_count >= cfg.num_workers) continue;  // controller guard: K < P
            const double f_start = std::max(sim.current_loss(), kLossFloor);
            const int chosen = next_wait_count(rule, state.f0, f_start, state.wait_count);
            state.history.push_back({state.slot_index, f_start, chosen});
            if (chosen != state.wait_count) {
                state.wait_count = chosen;
                sim.set_wait_count(chosen);
            }
        }
    }

    AdaSyncRun out{sim.take_trace(), std::move(state)};
    if (out.trace.records.empty()) throw HorizonTooSmall("horizon admits no parameter update");
    return out;
}

}  // namespace staleracer
