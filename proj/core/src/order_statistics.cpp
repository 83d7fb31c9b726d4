#include "staleracer/order_statistics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "staleracer/errors.hpp"

namespace staleracer {

double harmonic_number(int n) {
    if (n < 0) throw InvalidRank("harmonic number needs n >= 0");
    double h = 0.0;
    for (int i = 1; i <= n; ++i) h += 1.0 / static_cast<double>(i);
    return h;
}

static void check_rank(int k, int p) {
    if (p < 1) throw InvalidRank("order statistic needs p >= 1");
    if (k < 1 || k > p) throw InvalidRank("order statistic needs 1 <= k <= p");
}

double expected_order_statistic(const DelayDistribution& dist, int k, int p) {
    check_rank(k, p);
    return std::visit(
        [k, p](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return (harmonic_number(p) - harmonic_number(p - k)) / d.rate;
            } else if constexpr (std::is_same_v<T, ShiftedExponential>) {
                // the shift moves every order statistic by the same amount
                return d.shift + (harmonic_number(p) - harmonic_number(p - k)) / d.rate;
            } else if constexpr (std::is_same_v<T, Pareto>) {
                // scale * Gamma(p+1) Gamma(p-k+1-1/shape) / (Gamma(p-k+1) Gamma(p+1-1/shape)),
                // evaluated in log space to stay finite for large p
                const double inv = 1.0 / d.shape;
                const double lg = std::lgamma(static_cast<double>(p) + 1.0) +
                                  std::lgamma(static_cast<double>(p - k) + 1.0 - inv) -
                                  std::lgamma(static_cast<double>(p - k) + 1.0) -
                                  std::lgamma(static_cast<double>(p) + 1.0 - inv);
                return d.scale * std::exp(lg);
            } else {
                throw UnsupportedClosedForm(
                    "no closed-form order statistic for hyperexponential delays");
            }
        },
        dist);
}

OrderStatEstimate mc_expected_order_statistic(const DelayDistribution& dist, int k, int p,
                                              std::size_t samples, std::uint64_t seed,
                                              std::size_t streams) {
    check_rank(k, p);
    if (samples == 0) throw std::invalid_argument("need samples >= 1");
    if (streams == 0) streams = 1;
    if (streams > samples) streams = samples;

    double sum = 0.0;
    double sum_sq = 0.0;
    std::vector<double> draws(static_cast<std::size_t>(p));
    for (std::size_t s = 0; s < streams; ++s) {
        RngStream rng(derive_seed(seed, s));
        const std::size_t n = samples / streams + (s < samples % streams ? 1 : 0);
        double local = 0.0;
        double local_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (auto& x : draws) x = sample(dist, rng);
            std::nth_element(draws.begin(), draws.begin() + (k - 1), draws.end());
            const double v = draws[static_cast<std::size_t>(k - 1)];
            local += v;
            local_sq += v * v;
        }
        sum += local;
        sum_sq += local_sq;
    }
    const double n = static_cast<double>(samples);
    const double m = sum / n;
    const double var = samples > 1 ? (sum_sq - n * m * m) / (n - 1.0) : 0.0;
    return {m, std::sqrt(std::max(var, 0.0) / n)};
}

}  // namespace staleracer
