#pragma once

#include <cstddef>
#include <vector>

namespace staleracer {

double mean(const std::vector<double>& xs);
double sample_variance(const std::vector<double>& xs);

// standard error of the sample mean
double standard_error(const std::vector<double>& xs);

// median of a copy; averages the two central order statistics for even n
double median(std::vector<double> xs);

// interquartile range (linear-interpolation quantiles, type 7)
double iqr(std::vector<double> xs);

struct MeanCi {
    double mean = 0.0;
    double ci95 = 0.0;  // half-width
};

// 95% confidence half-width for the mean of a (possibly autocorrelated)
// sequence: split into `batches` contiguous batches and apply a t-interval
// to the batch means. Falls back to fewer batches when the sequence is short.
MeanCi batch_means_ci(const std::vector<double>& xs, std::size_t batches = 30);

}  // namespace staleracer
