#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace staleracer {

// Rank K outside [1, P] or P outside its supported range.
struct InvalidRank : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// No closed-form expression exists for the requested quantity.
struct UnsupportedClosedForm : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An analytical bound does not apply to the given variant/distribution pair.
struct BoundInapplicable : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Consecutive-iteration bound needs P divisible by K.
struct NotDivisible : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Loss anchor must be strictly positive.
struct NonPositiveLoss : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Horizon admits zero parameter updates.
struct HorizonTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Trace lacks the records or snapshots needed for an estimate.
struct InsufficientRecords : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Aggregate of validation failures; carries every problem found, not just the first.
struct ConfigError : std::runtime_error {
    explicit ConfigError(std::vector<std::string> problems_)
        : std::runtime_error(join(problems_)), problems(std::move(problems_)) {}

    std::vector<std::string> problems;

  private:
    static std::string join(const std::vector<std::string>& ps) {
        std::string out = "invalid config:";
        for (const auto& p : ps) {
            out += "\n  - ";
            out += p;
        }
        return out;
    }
};

}  // namespace staleracer
