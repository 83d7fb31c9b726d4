#include "staleracer/delay_model.hpp"

#include <cmath>
#include <stdexcept>

#include "staleracer/errors.hpp"

namespace staleracer {

Exponential::Exponential(double rate_) : rate(rate_) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential rate must be > 0");
}

ShiftedExponential::ShiftedExponential(double shift_, double rate_)
    : shift(shift_), rate(rate_) {
    if (!(shift >= 0.0)) throw std::invalid_argument("shift must be >= 0");
    if (!(rate > 0.0)) throw std::invalid_argument("rate must be > 0");
}

Pareto::Pareto(double shape_, double scale_) : shape(shape_), scale(scale_) {
    if (!(shape > 1.0)) throw std::invalid_argument("pareto shape must be > 1 (finite mean)");
    if (!(scale > 0.0)) throw std::invalid_argument("pareto scale must be > 0");
}

HyperExponential::HyperExponential(std::vector<double> branch_probs_,
                                   std::vector<double> rates_)
    : branch_probs(std::move(branch_probs_)), rates(std::move(rates_)) {
    if (branch_probs.empty() || branch_probs.size() != rates.size())
        throw std::invalid_argument("hyperexponential needs matching, nonempty probs and rates");
    double total = 0.0;
    for (double p : branch_probs) {
        if (!(p > 0.0)) throw std::invalid_argument("branch probabilities must be > 0");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("branch probabilities must sum to 1");
    for (double r : rates)
        if (!(r > 0.0)) throw std::invalid_argument("branch rates must be > 0");
}

double sample(const DelayDistribution& dist, RngStream& rng) {
    return std::visit(
        [&rng](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return rng.exponential(d.rate);
            } else if constexpr (std::is_same_v<T, ShiftedExponential>) {
                return d.shift + rng.exponential(d.rate);
            } else if constexpr (std::is_same_v<T, Pareto>) {
                return d.scale * std::pow(rng.uniform(), -1.0 / d.shape);
            } else {
                const double u = rng.uniform();
                double acc = 0.0;
                std::size_t branch = d.rates.size() - 1;
                for (std::size_t i = 0; i < d.branch_probs.size(); ++i) {
                    acc += d.branch_probs[i];
                    if (u < acc) {
                        branch = i;
                        break;
                    }
                }
                return rng.exponential(d.rates[branch]);
            }
        },
        dist);
}

double mean(const DelayDistribution& dist) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return 1.0 / d.rate;
            } else if constexpr (std::is_same_v<T, ShiftedExponential>) {
                return d.shift + 1.0 / d.rate;
            } else if constexpr (std::is_same_v<T, Pareto>) {
                return d.shape * d.scale / (d.shape - 1.0);
            } else {
                double m = 0.0;
                for (std::size_t i = 0; i < d.rates.size(); ++i)
                    m += d.branch_probs[i] / d.rates[i];
                return m;
            }
        },
        dist);
}

double survival(const DelayDistribution& dist, double x) {
    if (x <= 0.0) return 1.0;
    return std::visit(
        [x](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return std::exp(-d.rate * x);
            } else if constexpr (std::is_same_v<T, ShiftedExponential>) {
                return x <= d.shift ? 1.0 : std::exp(-d.rate * (x - d.shift));
            } else if constexpr (std::is_same_v<T, Pareto>) {
                return x <= d.scale ? 1.0 : std::pow(d.scale / x, d.shape);
            } else {
                double s = 0.0;
                for (std::size_t i = 0; i < d.rates.size(); ++i)
                    s += d.branch_probs[i] * std::exp(-d.rates[i] * x);
                return s;
            }
        },
        dist);
}

AgingClass classify_aging(const DelayDistribution& dist) {
    return std::visit(
        [](const auto& d) -> AgingClass {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return AgingClass::Memoryless;
            } else if constexpr (std::is_same_v<T, ShiftedExponential>) {
                return d.shift > 0.0 ? AgingClass::NewLongerThanUsed : AgingClass::Memoryless;
            } else if constexpr (std::is_same_v<T, Pareto>) {
                return AgingClass::NewLongerThanUsed;
            } else {
                // all rates equal collapses to a plain exponential
                for (std::size_t i = 1; i < d.rates.size(); ++i)
                    if (d.rates[i] != d.rates[0]) return AgingClass::NewShorterThanUsed;
                return AgingClass::Memoryless;
            }
        },
        dist);
}

std::string aging_class_name(AgingClass c) {
    switch (c) {
        case AgingClass::Memoryless: return "memoryless";
        case AgingClass::NewLongerThanUsed: return "new_longer_than_used";
        case AgingClass::NewShorterThanUsed: return "new_shorter_than_used";
    }
    return "unknown";
}

std::string kind_name(const DelayDistribution& dist) {
    return std::visit(
        [](const auto& d) -> std::string {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>) return "exponential";
            else if constexpr (std::is_same_v<T, ShiftedExponential>) return "shifted_exponential";
            else if constexpr (std::is_same_v<T, Pareto>) return "pareto";
            else return "hyper_exponential";
        },
        dist);
}

P0Bound p0_bound(const DelayDistribution& dist, int num_workers) {
    if (num_workers < 1) throw InvalidRank("p0 bound needs num_workers >= 1");
    const double v = 1.0 / static_cast<double>(num_workers);
    switch (classify_aging(dist)) {
        case AgingClass::Memoryless: return {P0Bound::Kind::Exact, v};
        case AgingClass::NewLongerThanUsed: return {P0Bound::Kind::Upper, v};
        case AgingClass::NewShorterThanUsed: return {P0Bound::Kind::Lower, v};
    }
    throw std::logic_error("unreachable aging class");
}

}  // namespace staleracer
