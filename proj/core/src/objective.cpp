#include "staleracer/objective.hpp"

#include <cmath>
#include <stdexcept>

#include "staleracer/errors.hpp"
#include "staleracer/rng.hpp"

namespace staleracer {

Quadratic::Quadratic(Eigen::VectorXd eigenvalues_, Eigen::VectorXd w_star_, double f_star_)
    : eigenvalues(std::move(eigenvalues_)), w_star(std::move(w_star_)), f_star(f_star_) {
    if (eigenvalues.size() == 0)
        throw std::invalid_argument("quadratic needs at least one eigenvalue");
    if (eigenvalues.size() != w_star.size())
        throw DimensionMismatch("eigenvalues and w_star sizes differ");
    if ((eigenvalues.array() <= 0.0).any())
        throw std::invalid_argument("quadratic eigenvalues must be > 0");
}

static double logistic_loss(const Logistic& d, const Eigen::VectorXd& w) {
    const Eigen::VectorXd margins = (d.features * w).cwiseProduct(d.labels);
    double s = 0.0;
    for (Eigen::Index i = 0; i < margins.size(); ++i) {
        const double z = -margins[i];
        // log(1 + e^z) without overflow
        s += z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    }
    return s / static_cast<double>(d.features.rows()) + 0.5 * d.l2 * w.squaredNorm();
}

static Eigen::VectorXd logistic_grad(const Logistic& d, const Eigen::VectorXd& w) {
    const Eigen::VectorXd margins = (d.features * w).cwiseProduct(d.labels);
    Eigen::VectorXd coeff(margins.size());
    for (Eigen::Index i = 0; i < margins.size(); ++i)
        coeff[i] = -d.labels[i] / (1.0 + std::exp(margins[i]));
    return d.features.transpose() * coeff / static_cast<double>(d.features.rows()) +
           d.l2 * w;
}

Logistic::Logistic(Eigen::MatrixXd features_, Eigen::VectorXd labels_, double l2_)
    : features(std::move(features_)), labels(std::move(labels_)), l2(l2_) {
    if (features.rows() == 0 || features.cols() == 0)
        throw std::invalid_argument("logistic needs a nonempty dataset");
    if (labels.size() != features.rows())
        throw DimensionMismatch("label count must match feature rows");
    for (Eigen::Index i = 0; i < labels.size(); ++i)
        if (labels[i] != 1.0 && labels[i] != -1.0)
            throw std::invalid_argument("labels must be +1 or -1");
    if (!(l2 > 0.0)) throw std::invalid_argument("l2 must be > 0 for strong convexity");

    smoothness_bound = l2 + features.rowwise().squaredNorm().maxCoeff() / 4.0;

    // full-gradient descent to the optimum; cached so excess loss is cheap later
    Eigen::VectorXd w = Eigen::VectorXd::Zero(features.cols());
    const double step = 1.0 / smoothness_bound;
    for (int it = 0; it < 2000000; ++it) {
        const Eigen::VectorXd g = logistic_grad(*this, w);
        if (g.norm() <= 1e-10) break;
        w -= step * g;
    }
    optimal_value = logistic_loss(*this, w);
}

double full_loss(const Objective& obj, const Eigen::VectorXd& w) {
    return std::visit(
        [&w](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Quadratic>) {
                if (w.size() != d.eigenvalues.size())
                    throw DimensionMismatch("parameter dimension mismatch");
                const Eigen::VectorXd e = w - d.w_star;
                return d.f_star + 0.5 * e.cwiseProduct(e).dot(d.eigenvalues);
            } else {
                if (w.size() != d.features.cols())
                    throw DimensionMismatch("parameter dimension mismatch");
                return logistic_loss(d, w);
            }
        },
        obj);
}

Eigen::VectorXd full_gradient(const Objective& obj, const Eigen::VectorXd& w) {
    return std::visit(
        [&w](const auto& d) -> Eigen::VectorXd {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Quadratic>) {
                if (w.size() != d.eigenvalues.size())
                    throw DimensionMismatch("parameter dimension mismatch");
                return d.eigenvalues.cwiseProduct(w - d.w_star);
            } else {
                if (w.size() != d.features.cols())
                    throw DimensionMismatch("parameter dimension mismatch");
                return logistic_grad(d, w);
            }
        },
        obj);
}

int dimension(const Objective& obj) {
    return std::visit(
        [](const auto& d) -> int {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Quadratic>)
                return static_cast<int>(d.eigenvalues.size());
            else
                return static_cast<int>(d.features.cols());
        },
        obj);
}

double strong_convexity(const Objective& obj) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Quadratic>)
                return d.eigenvalues.minCoeff();
            else
                return d.l2;
        },
        obj);
}

double smoothness(const Objective& obj) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Quadratic>)
                return d.eigenvalues.maxCoeff();
            else
                return d.smoothness_bound;
        },
        obj);
}

double optimal_value(const Objective& obj) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Quadratic>)
                return d.f_star;
            else
                return d.optimal_value;
        },
        obj);
}

Quadratic quadratic_from_spectrum(double c, double l, int dim) {
    if (!(c > 0.0) || !(l >= c)) throw std::invalid_argument("need 0 < c <= L");
    if (dim < 1) throw std::invalid_argument("need dim >= 1");
    Eigen::VectorXd eig(dim);
    if (dim == 1) {
        eig[0] = c;
    } else {
        const double ratio = std::log(l / c) / static_cast<double>(dim - 1);
        for (int i = 0; i < dim; ++i) eig[i] = c * std::exp(ratio * i);
        eig[dim - 1] = l;  // pin the endpoint against rounding
    }
    return Quadratic(eig, Eigen::VectorXd::Zero(dim), 0.0);
}

Logistic synthetic_logistic(int num_samples, int dim, double separation,
                            std::uint64_t seed, double l2) {
    if (num_samples < 2 || dim < 1) throw std::invalid_argument("need n >= 2 and dim >= 1");
    RngStream rng(seed);
    Eigen::MatrixXd x(num_samples, dim);
    Eigen::VectorXd y(num_samples);
    for (int i = 0; i < num_samples; ++i) {
        y[i] = (i % 2 == 0) ? 1.0 : -1.0;
        for (int j = 0; j < dim; ++j) x(i, j) = rng.normal();
        x(i, 0) += y[i] * separation / 2.0;  // class means split along axis 0
    }
    return Logistic(std::move(x), std::move(y), l2);
}

}  // namespace staleracer
