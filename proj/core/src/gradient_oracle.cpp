#include "staleracer/gradient_oracle.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "staleracer/errors.hpp"

namespace staleracer {

GradientOracle::GradientOracle(const Objective* objective_, NoiseModel noise_,
                               int minibatch_size_)
    : objective(objective_), noise(noise_), minibatch_size(minibatch_size_) {
    if (objective == nullptr) throw std::invalid_argument("oracle needs an objective");
    if (minibatch_size < 1) throw std::invalid_argument("minibatch size must be >= 1");
    if (std::holds_alternative<Subsampling>(noise)) {
        const auto* logit = std::get_if<Logistic>(objective);
        if (logit == nullptr)
            throw std::invalid_argument("subsampling needs an objective with a dataset");
        if (minibatch_size > logit->features.rows())
            throw std::invalid_argument("minibatch size exceeds dataset size");
    } else {
        if (!(std::get<AdditiveGaussian>(noise).sigma_sq >= 0.0))
            throw std::invalid_argument("sigma_sq must be >= 0");
    }
}

static Eigen::VectorXd subsampled_gradient(const Logistic& d, int m,
                                           const Eigen::VectorXd& w, RngStream& rng) {
    const auto n = static_cast<std::size_t>(d.features.rows());
    // partial Fisher-Yates for m distinct rows
    static thread_local std::vector<std::uint32_t> idx;
    idx.resize(n);
    std::iota(idx.begin(), idx.end(), 0u);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(w.size());
    for (int t = 0; t < m; ++t) {
        const std::size_t pick = t + rng.uniform_index(n - t);
        std::swap(idx[t], idx[pick]);
        const auto i = static_cast<Eigen::Index>(idx[t]);
        const double margin = d.labels[i] * d.features.row(i).dot(w);
        const double coeff = -d.labels[i] / (1.0 + std::exp(margin));
        g += coeff * d.features.row(i).transpose();
    }
    return g / static_cast<double>(m) + d.l2 * w;
}

Eigen::VectorXd stochastic_gradient_from_base(const GradientOracle& oracle,
                                              const Eigen::VectorXd& w,
                                              const Eigen::VectorXd& base, RngStream& rng) {
    if (const auto* add = std::get_if<AdditiveGaussian>(&oracle.noise)) {
        const double dim = static_cast<double>(w.size());
        const double scale =
            std::sqrt(add->sigma_sq / (static_cast<double>(oracle.minibatch_size) * dim));
        Eigen::VectorXd g(w.size());
        for (Eigen::Index i = 0; i < w.size(); ++i) g[i] = base[i] + scale * rng.normal();
        return g;
    }
    return subsampled_gradient(std::get<Logistic>(*oracle.objective), oracle.minibatch_size,
                               w, rng);
}

Eigen::VectorXd stochastic_gradient(const GradientOracle& oracle, const Eigen::VectorXd& w,
                                    RngStream& rng) {
    if (std::holds_alternative<AdditiveGaussian>(oracle.noise))
        return stochastic_gradient_from_base(oracle, w, full_gradient(*oracle.objective, w),
                                             rng);
    return stochastic_gradient_from_base(oracle, w, Eigen::VectorXd(), rng);
}

VarianceConstants variance_constants(const GradientOracle& oracle,
                                     const std::vector<Eigen::VectorXd>& probe_points,
                                     int draws, std::uint64_t seed) {
    if (const auto* add = std::get_if<AdditiveGaussian>(&oracle.noise))
        return {add->sigma_sq, 0.0, false};

    if (probe_points.size() < 2)
        throw std::invalid_argument("variance fit needs at least 2 probe points");
    if (draws < 2) throw std::invalid_argument("variance fit needs at least 2 draws");

    RngStream rng(seed);
    const double m = static_cast<double>(oracle.minibatch_size);
    // least squares of mean squared deviation on ||grad F||^2
    std::vector<double> xs, ys;
    xs.reserve(probe_points.size());
    ys.reserve(probe_points.size());
    for (const auto& w : probe_points) {
        const Eigen::VectorXd g_full = full_gradient(*oracle.objective, w);
        double dev = 0.0;
        for (int t = 0; t < draws; ++t)
            dev += (stochastic_gradient(oracle, w, rng) - g_full).squaredNorm();
        xs.push_back(g_full.squaredNorm());
        ys.push_back(dev / draws);
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double det = n * sxx - sx * sx;
    double slope = 0.0, intercept = sy / n;
    if (det > 1e-30) {
        slope = (n * sxy - sx * sy) / det;
        intercept = (sy - slope * sx) / n;
    }
    return {std::max(0.0, intercept * m), std::max(0.0, slope * m), true};
}

}  // namespace staleracer
