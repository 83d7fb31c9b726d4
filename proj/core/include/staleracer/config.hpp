#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "staleracer/adasync.hpp"
#include "staleracer/delay_model.hpp"
#include "staleracer/gradient_oracle.hpp"
#include "staleracer/objective.hpp"
#include "staleracer/simulator.hpp"
#include "staleracer/variant.hpp"

namespace staleracer {

// Objectives are declared as recipes and materialized on demand.
struct QuadraticSpectrumSpec {
    double c;
    double l;
    int dim;
};
struct QuadraticExplicitSpec {
    std::vector<double> eigenvalues;
    std::vector<double> w_star;  // empty = origin
    double f_star = 0.0;
};
struct LogisticRecipeSpec {
    int num_samples;
    int dim;
    double separation;
    std::uint64_t seed;
    double l2;
};
using ObjectiveSpec =
    std::variant<QuadraticSpectrumSpec, QuadraticExplicitSpec, LogisticRecipeSpec>;

Objective build_objective(const ObjectiveSpec& spec);

// Starting point: zero, a constant fill, explicit coordinates, or (quadratic
// only) the point along the all-ones direction with a prescribed excess loss.
struct W0Zero {};
struct W0Constant {
    double value;
};
struct W0Explicit {
    std::vector<double> values;
};
struct W0Excess {
    double gap;
};
using W0Spec = std::variant<W0Zero, W0Constant, W0Explicit, W0Excess>;

Eigen::VectorXd build_w0(const W0Spec& spec, const Objective& obj);

struct AdaSyncBlock {
    int initial_wait_count = 1;
    double slot_length = 0.0;
    Rounding rounding = Rounding::Nearest;
    bool monotone = true;
};

struct GridEntry {
    Variant variant;
    int wait_count;
};

// One declarative experiment: a single run for `simulate`/`adasync`, or a
// grid sweep with replications for `sweep`.
struct ExperimentConfig {
    std::string scenario = "experiment";

    Variant variant = Variant::KSync;
    int wait_count = 1;
    int num_workers = 1;
    int minibatch_size = 1;
    double learning_rate = 0.1;

    DelayDistribution dist = Exponential(1.0);
    ObjectiveSpec objective = QuadraticSpectrumSpec{1.0, 1.0, 1};
    NoiseModel noise = AdditiveGaussian{1.0};
    W0Spec w0 = W0Zero{};
    Horizon horizon = Horizon::iterations(1);
    Seeds seeds{1, 2};
    int loss_cadence = 1;
    bool store_parameters = true;

    std::vector<GridEntry> grid;          // sweep cells; defaults to {variant, wait_count}
    int replications = 1;
    std::vector<double> targets;          // excess-loss levels for the frontier

    std::optional<AdaSyncBlock> adasync;

    VariantConfig variant_config() const;
    AdaSyncConfig adasync_config() const;  // throws if no adasync block
};

// Parses and validates, collecting every problem into one ConfigError.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

// Tagged record like {"kind":"shifted_exponential","shift":1.0,"rate":1.0}.
DelayDistribution parse_distribution(const std::string& json_text);
std::string distribution_to_json(const DelayDistribution& dist);

// Reads a file if `arg` names one, otherwise treats `arg` as inline JSON.
DelayDistribution distribution_from_arg(const std::string& arg);

}  // namespace staleracer
