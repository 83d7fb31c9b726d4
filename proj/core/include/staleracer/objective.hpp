#pragma once

#include <cstdint>
#include <variant>

#include <Eigen/Core>

namespace staleracer {

// F(w) = f_star + (1/2) sum_i eigenvalues[i] * (w[i] - w_star[i])^2
struct Quadratic {
    Eigen::VectorXd eigenvalues;  // all > 0
    Eigen::VectorXd w_star;
    double f_star = 0.0;

    Quadratic(Eigen::VectorXd eigenvalues, Eigen::VectorXd w_star, double f_star = 0.0);
};

// L2-regularized logistic regression over a fixed dataset with +-1 labels.
struct Logistic {
    Eigen::MatrixXd features;  // one row per sample
    Eigen::VectorXd labels;
    double l2;                 // > 0 so the problem is strongly convex

    Logistic(Eigen::MatrixXd features, Eigen::VectorXd labels, double l2);

    double smoothness_bound;   // l2 + max row norm^2 / 4
    double optimal_value;      // found once by full-gradient descent
};

using Objective = std::variant<Quadratic, Logistic>;

double full_loss(const Objective& obj, const Eigen::VectorXd& w);
Eigen::VectorXd full_gradient(const Objective& obj, const Eigen::VectorXd& w);

int dimension(const Objective& obj);
double strong_convexity(const Objective& obj);  // c
double smoothness(const Objective& obj);        // L
double optimal_value(const Objective& obj);     // F*

// quadratic with a log-spaced spectrum between c and L, w_star = 0, f_star = 0
Quadratic quadratic_from_spectrum(double c, double l, int dim);

// two-Gaussian classification data; deterministic in the seed
Logistic synthetic_logistic(int num_samples, int dim, double separation,
                            std::uint64_t seed, double l2);

}  // namespace staleracer
