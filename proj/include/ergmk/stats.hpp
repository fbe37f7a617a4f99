#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace ergmk {

inline double logistic(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

double mean(std::span<const double> xs);
/// Unbiased sample variance.
double variance(std::span<const double> xs);
/// Standard error of the mean of (approximately independent) batch means.
double standard_error(std::span<const double> batch_means);
/// Batch means of a series cut into `batches` contiguous equal blocks.
std::vector<double> batch_means(std::span<const double> xs, int batches);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test against Exp(1).
KsResult ks_unit_exponential(std::vector<double> xs);

}  // namespace ergmk
