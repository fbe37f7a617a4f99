#include "ergmk/stats.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ergmk {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of an empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

double standard_error(std::span<const double> batch_means) {
  if (batch_means.size() < 2) return 0.0;
  return std::sqrt(variance(batch_means) / static_cast<double>(batch_means.size()));
}

std::vector<double> batch_means(std::span<const double> xs, int batches) {
  if (batches < 1) throw std::invalid_argument("need at least one batch");
  const auto b = static_cast<std::size_t>(batches);
  const std::size_t width = xs.size() / b;
  if (width == 0) throw std::invalid_argument("fewer samples than batches");
  std::vector<double> out;
  out.reserve(b);
  for (std::size_t k = 0; k < b; ++k) out.push_back(mean(xs.subspan(k * width, width)));
  return out;
}

KsResult ks_unit_exponential(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("KS test of an empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = 1.0 - std::exp(-xs[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  // asymptotic Kolmogorov distribution with the Stephens small-sample correction
  const double lam = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lam * lam);
    p += term;
    if (std::abs(term) < 1e-12) break;
  }
  return {d, std::clamp(p, 0.0, 1.0)};
}

}  // namespace ergmk
