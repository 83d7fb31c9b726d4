#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "staleracer/rng.hpp"

namespace staleracer {

// Worker task-time distributions. All are strictly positive and have finite
// mean; constructors validate parameters and throw std::invalid_argument.

struct Exponential {
    double rate;  // E[X] = 1/rate

    explicit Exponential(double rate);
};

// fixed setup cost plus an exponential tail
struct ShiftedExponential {
    double shift;  // >= 0
    double rate;

    ShiftedExponential(double shift, double rate);
};

struct Pareto {
    double shape;  // > 1 so the mean exists
    double scale;  // support minimum; E[X] = shape*scale/(shape-1)

    Pareto(double shape, double scale);
};

// mixture of exponentials: branch i with probability branch_probs[i], rate rates[i]
struct HyperExponential {
    std::vector<double> branch_probs;
    std::vector<double> rates;

    HyperExponential(std::vector<double> branch_probs, std::vector<double> rates);
};

using DelayDistribution =
    std::variant<Exponential, ShiftedExponential, Pareto, HyperExponential>;

double sample(const DelayDistribution& dist, RngStream& rng);
double mean(const DelayDistribution& dist);

// P(X > x)
double survival(const DelayDistribution& dist, double x);

// How the remaining time of an in-progress task compares with a fresh draw.
enum class AgingClass { Memoryless, NewLongerThanUsed, NewShorterThanUsed };

AgingClass classify_aging(const DelayDistribution& dist);

std::string aging_class_name(AgingClass c);
std::string kind_name(const DelayDistribution& dist);

// Bound on the probability that a fully-asynchronous update uses a fresh
// (zero-staleness) gradient, determined by the aging class.
struct P0Bound {
    enum class Kind { Exact, Upper, Lower };
    Kind kind;
    double value;  // 1/P in every supported case
};

P0Bound p0_bound(const DelayDistribution& dist, int num_workers);

}  // namespace staleracer
