#include "staleracer/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "staleracer/errors.hpp"

namespace staleracer {

using nlohmann::json;

Objective build_objective(const ObjectiveSpec& spec) {
    return std::visit(
        [](const auto& s) -> Objective {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, QuadraticSpectrumSpec>) {
                return quadratic_from_spectrum(s.c, s.l, s.dim);
            } else if constexpr (std::is_same_v<T, QuadraticExplicitSpec>) {
                Eigen::VectorXd eig =
                    Eigen::Map<const Eigen::VectorXd>(s.eigenvalues.data(),
                                                      static_cast<Eigen::Index>(s.eigenvalues.size()));
                Eigen::VectorXd ws = Eigen::VectorXd::Zero(eig.size());
                if (!s.w_star.empty())
                    ws = Eigen::Map<const Eigen::VectorXd>(s.w_star.data(),
                                                           static_cast<Eigen::Index>(s.w_star.size()));
                return Quadratic(std::move(eig), std::move(ws), s.f_star);
            } else {
                return synthetic_logistic(s.num_samples, s.dim, s.separation, s.seed, s.l2);
            }
        },
        spec);
}

Eigen::VectorXd build_w0(const W0Spec& spec, const Objective& obj) {
    const int d = dimension(obj);
    return std::visit(
        [&](const auto& s) -> Eigen::VectorXd {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, W0Zero>) {
                return Eigen::VectorXd::Zero(d);
            } else if constexpr (std::is_same_v<T, W0Constant>) {
                return Eigen::VectorXd::Constant(d, s.value);
            } else if constexpr (std::is_same_v<T, W0Explicit>) {
                if (static_cast<int>(s.values.size()) != d)
                    throw DimensionMismatch("w0 length does not match the objective");
                return Eigen::Map<const Eigen::VectorXd>(s.values.data(), d);
            } else {
                const auto* quad = std::get_if<Quadratic>(&obj);
                if (quad == nullptr)
                    throw std::invalid_argument("excess-loss start needs a quadratic objective");
                if (!(s.gap >= 0.0)) throw std::invalid_argument("excess gap must be >= 0");
                // move along the all-ones direction until F - f_star = gap
                const double t = std::sqrt(2.0 * s.gap / quad->eigenvalues.sum());
                return quad->w_star + Eigen::VectorXd::Constant(d, t);
            }
        },
        spec);
}

VariantConfig ExperimentConfig::variant_config() const {
    return {variant, wait_count, num_workers, minibatch_size, learning_rate};
}

AdaSyncConfig ExperimentConfig::adasync_config() const {
    if (!adasync.has_value())
        throw std::invalid_argument("config has no adasync block");
    AdaSyncConfig cfg;
    cfg.variant = variant;
    cfg.initial_wait_count = adasync->initial_wait_count;
    cfg.num_workers = num_workers;
    cfg.slot_length = adasync->slot_length;
    cfg.rounding = adasync->rounding;
    cfg.monotone = adasync->monotone;
    cfg.minibatch_size = minibatch_size;
    cfg.learning_rate = learning_rate;
    return cfg;
}

namespace {

// collects problems; the caller throws one ConfigError with all of them
struct Problems {
    std::vector<std::string> list;
    void add(const std::string& p) { list.push_back(p); }

    template <typename Fn>
    void attempt(const std::string& where, Fn&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            add(where + ": " + e.what());
        }
    }
};

DelayDistribution distribution_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("distribution must be an object with a \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "exponential") return Exponential(j.at("rate").get<double>());
    if (kind == "shifted_exponential")
        return ShiftedExponential(j.at("shift").get<double>(), j.at("rate").get<double>());
    if (kind == "pareto")
        return Pareto(j.at("shape").get<double>(), j.at("scale").get<double>());
    if (kind == "hyper_exponential")
        return HyperExponential(j.at("branch_probs").get<std::vector<double>>(),
                                j.at("rates").get<std::vector<double>>());
    throw std::invalid_argument("unknown distribution kind '" + kind + "'");
}

ObjectiveSpec objective_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("objective must be an object with a \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "quadratic") {
        if (j.contains("eigenvalues")) {
            QuadraticExplicitSpec s;
            s.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
            if (j.contains("w_star")) s.w_star = j.at("w_star").get<std::vector<double>>();
            s.f_star = j.value("f_star", 0.0);
            return s;
        }
        return QuadraticSpectrumSpec{j.at("c").get<double>(), j.at("L").get<double>(),
                                     j.at("dim").get<int>()};
    }
    if (kind == "logistic")
        return LogisticRecipeSpec{j.at("n").get<int>(), j.at("dim").get<int>(),
                                  j.at("separation").get<double>(),
                                  j.at("seed").get<std::uint64_t>(),
                                  j.at("l2").get<double>()};
    throw std::invalid_argument("unknown objective kind '" + kind + "'");
}

NoiseModel noise_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("noise must be an object with a \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "additive_gaussian") return AdditiveGaussian{j.at("sigma_sq").get<double>()};
    if (kind == "subsampling") return Subsampling{};
    throw std::invalid_argument("unknown noise kind '" + kind + "'");
}

W0Spec w0_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("w0 must be an object with a \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "zero") return W0Zero{};
    if (kind == "constant") return W0Constant{j.at("value").get<double>()};
    if (kind == "explicit") return W0Explicit{j.at("values").get<std::vector<double>>()};
    if (kind == "excess") return W0Excess{j.at("gap").get<double>()};
    throw std::invalid_argument("unknown w0 kind '" + kind + "'");
}

Horizon horizon_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("horizon must be an object");
    const bool has_iter = j.contains("iterations");
    const bool has_time = j.contains("sim_time");
    if (has_iter == has_time)
        throw std::invalid_argument("horizon needs exactly one of \"iterations\", \"sim_time\"");
    return has_iter ? Horizon::iterations(j.at("iterations").get<long>())
                    : Horizon::sim_time(j.at("sim_time").get<double>());
}

Rounding rounding_from_json(const std::string& name) {
    if (name == "ceil") return Rounding::Ceil;
    if (name == "nearest") return Rounding::Nearest;
    throw std::invalid_argument("rounding must be \"ceil\" or \"nearest\"");
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError({std::string("json parse failure: ") + e.what()});
    }
    if (!j.is_object()) throw ConfigError({"config root must be a JSON object"});

    ExperimentConfig cfg;
    Problems problems;

    problems.attempt("scenario", [&] { cfg.scenario = j.value("scenario", cfg.scenario); });
    problems.attempt("variant", [&] {
        if (j.contains("variant")) cfg.variant = variant_from_name(j.at("variant"));
        else problems.add("variant: missing");
    });
    problems.attempt("K", [&] { cfg.wait_count = j.value("K", cfg.wait_count); });
    problems.attempt("P", [&] {
        if (j.contains("P")) cfg.num_workers = j.at("P").get<int>();
        else problems.add("P: missing");
    });
    problems.attempt("m", [&] { cfg.minibatch_size = j.value("m", 1); });
    problems.attempt("eta", [&] {
        if (j.contains("eta")) cfg.learning_rate = j.at("eta").get<double>();
        else problems.add("eta: missing");
    });
    problems.attempt("dist", [&] {
        if (j.contains("dist")) cfg.dist = distribution_from_json(j.at("dist"));
        else problems.add("dist: missing");
    });
    problems.attempt("objective", [&] {
        if (j.contains("objective")) cfg.objective = objective_from_json(j.at("objective"));
        else problems.add("objective: missing");
    });
    problems.attempt("noise", [&] {
        if (j.contains("noise")) cfg.noise = noise_from_json(j.at("noise"));
    });
    problems.attempt("w0", [&] {
        if (j.contains("w0")) cfg.w0 = w0_from_json(j.at("w0"));
    });
    problems.attempt("horizon", [&] {
        if (j.contains("horizon")) cfg.horizon = horizon_from_json(j.at("horizon"));
        else problems.add("horizon: missing");
    });
    problems.attempt("seeds", [&] {
        if (j.contains("seeds")) {
            cfg.seeds.delay = j.at("seeds").at("delay").get<std::uint64_t>();
            cfg.seeds.data = j.at("seeds").at("data").get<std::uint64_t>();
        }
    });
    problems.attempt("loss_cadence", [&] {
        cfg.loss_cadence = j.value("loss_cadence", 1);
        if (cfg.loss_cadence < 0) throw std::invalid_argument("must be >= 0");
    });
    problems.attempt("store_parameters",
                     [&] { cfg.store_parameters = j.value("store_parameters", true); });
    problems.attempt("grid", [&] {
        if (!j.contains("grid")) return;
        for (const auto& cell : j.at("grid"))
            cfg.grid.push_back(
                {variant_from_name(cell.at("variant")), cell.at("K").get<int>()});
        if (cfg.grid.empty()) throw std::invalid_argument("grid must be nonempty when given");
    });
    problems.attempt("replications", [&] {
        cfg.replications = j.value("replications", 1);
        if (cfg.replications < 1) throw std::invalid_argument("must be >= 1");
    });
    problems.attempt("targets", [&] {
        if (!j.contains("targets")) return;
        cfg.targets = j.at("targets").get<std::vector<double>>();
        for (std::size_t i = 0; i < cfg.targets.size(); ++i) {
            if (!(cfg.targets[i] > 0.0)) throw std::invalid_argument("targets must be > 0");
            if (i > 0 && cfg.targets[i] >= cfg.targets[i - 1])
                throw std::invalid_argument("targets must be strictly decreasing");
        }
    });
    problems.attempt("adasync", [&] {
        if (!j.contains("adasync")) return;
        const auto& a = j.at("adasync");
        AdaSyncBlock blk;
        blk.initial_wait_count = a.at("K0").get<int>();
        blk.slot_length = a.at("slot_length").get<double>();
        blk.rounding = rounding_from_json(a.value("rounding", "nearest"));
        blk.monotone = a.value("monotone", true);
        cfg.adasync = blk;
    });

    // cross-field validation once individual fields parsed
    if (problems.list.empty()) {
        problems.attempt("variant config", [&] { cfg.variant_config().validate(); });
        for (const auto& cell : cfg.grid)
            problems.attempt("grid cell", [&] {
                VariantConfig vc = cfg.variant_config();
                vc.variant = cell.variant;
                vc.wait_count = cell.wait_count;
                vc.validate();
            });
        problems.attempt("objective", [&] { (void)build_objective(cfg.objective); });
        if (cfg.adasync.has_value())
            problems.attempt("adasync", [&] { cfg.adasync_config().validate(); });
    }

    if (!problems.list.empty()) throw ConfigError(std::move(problems.list));
    if (cfg.grid.empty()) cfg.grid.push_back({cfg.variant, cfg.wait_count});
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config(buf.str());
}

DelayDistribution parse_distribution(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError({std::string("json parse failure: ") + e.what()});
    }
    return distribution_from_json(j);
}

std::string distribution_to_json(const DelayDistribution& dist) {
    return std::visit(
        [](const auto& d) -> std::string {
            using T = std::decay_t<decltype(d)>;
            json j;
            if constexpr (std::is_same_v<T, Exponential>) {
                j = {{"kind", "exponential"}, {"rate", d.rate}};
            } else if constexpr (std::is_same_v<T, ShiftedExponential>) {
                j = {{"kind", "shifted_exponential"}, {"shift", d.shift}, {"rate", d.rate}};
            } else if constexpr (std::is_same_v<T, Pareto>) {
                j = {{"kind", "pareto"}, {"shape", d.shape}, {"scale", d.scale}};
            } else {
                j = {{"kind", "hyper_exponential"},
                     {"branch_probs", d.branch_probs},
                     {"rates", d.rates}};
            }
            return j.dump();
        },
        dist);
}

DelayDistribution distribution_from_arg(const std::string& arg) {
    std::ifstream in(arg);
    if (in) {
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_distribution(buf.str());
    }
    return parse_distribution(arg);
}

}  // namespace staleracer
