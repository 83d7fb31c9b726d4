#include "staleracer/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace staleracer {

double mean(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("mean of empty sequence");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) throw std::invalid_argument("variance needs at least 2 values");
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

double standard_error(const std::vector<double>& xs) {
    return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

static double quantile_sorted(const std::vector<double>& xs, double q) {
    const double pos = q * static_cast<double>(xs.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= xs.size()) return xs.back();
    const double frac = pos - static_cast<double>(lo);
    return xs[lo] * (1.0 - frac) + xs[lo + 1] * frac;
}

double median(std::vector<double> xs) {
    if (xs.empty()) throw std::invalid_argument("median of empty sequence");
    std::sort(xs.begin(), xs.end());
    return quantile_sorted(xs, 0.5);
}

double iqr(std::vector<double> xs) {
    if (xs.empty()) throw std::invalid_argument("iqr of empty sequence");
    std::sort(xs.begin(), xs.end());
    return quantile_sorted(xs, 0.75) - quantile_sorted(xs, 0.25);
}

// two-sided 97.5% quantiles of Student's t for 1..30 degrees of freedom
static double t_quantile_975(std::size_t df) {
    static const double table[30] = {
        12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
        2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
        2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
    if (df == 0) throw std::invalid_argument("t quantile needs df >= 1");
    if (df <= 30) return table[df - 1];
    return 1.960;
}

MeanCi batch_means_ci(const std::vector<double>& xs, std::size_t batches) {
    if (xs.empty()) throw std::invalid_argument("ci of empty sequence");
    if (batches < 2) batches = 2;
    if (xs.size() < 2 * batches) batches = std::max<std::size_t>(2, xs.size() / 2);

    const std::size_t per = xs.size() / batches;  // trailing remainder ignored
    std::vector<double> bm(batches, 0.0);
    for (std::size_t b = 0; b < batches; ++b) {
        double s = 0.0;
        for (std::size_t i = b * per; i < (b + 1) * per; ++i) s += xs[i];
        bm[b] = s / static_cast<double>(per);
    }
    MeanCi out;
    out.mean = mean(xs);
    out.ci95 = t_quantile_975(batches - 1) * standard_error(bm);
    return out;
}

}  // namespace staleracer
