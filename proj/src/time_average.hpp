#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace ergmk::detail {

/// Accumulates time integrals of piecewise-constant statistics after a
/// burn-in, overall and over equal-width batches of [burn_in, t_max].
class TimeIntegrator {
 public:
  TimeIntegrator(std::size_t stats, double burn_in, double t_max, int batches)
      : burn_in_(burn_in), integral_(stats, 0.0) {
    if (std::isfinite(t_max) && batches > 0) {
      width_ = (t_max - burn_in) / batches;
      batch_integral_.assign(static_cast<std::size_t>(batches), std::vector<double>(stats, 0.0));
      batch_time_.assign(static_cast<std::size_t>(batches), 0.0);
    }
  }

  /// Adds a stay on [t0, t1); returns the part of it inside the window.
  double add(double t0, double t1, const std::vector<double>& stats, double exit_rate) {
    const double a = std::max(t0, burn_in_);
    if (t1 <= a) return 0.0;
    const double len = t1 - a;
    time_ += len;
    exit_integral_ += exit_rate * len;
    for (std::size_t s = 0; s < stats.size(); ++s) integral_[s] += stats[s] * len;
    if (!batch_time_.empty()) {
      double lo = a;
      while (lo < t1) {
        auto b = static_cast<std::size_t>((lo - burn_in_) / width_);
        double hi = std::min(t1, burn_in_ + width_ * static_cast<double>(b + 1));
        if (hi <= lo) hi = std::min(t1, burn_in_ + width_ * static_cast<double>(++b + 1));
        if (b >= batch_time_.size()) break;
        batch_time_[b] += hi - lo;
        for (std::size_t s = 0; s < stats.size(); ++s) batch_integral_[b][s] += stats[s] * (hi - lo);
        lo = hi;
      }
    }
    return len;
  }

  /// Time averages (or `current` when the window is empty), the mean exit
  /// rate, and the means of batches covered for at least half their width.
  void finish(std::vector<double>& averages, std::vector<std::vector<double>>& batch_means, double& mean_rate,
              const std::vector<double>& current) const {
    if (time_ > 0.0) {
      averages.resize(integral_.size());
      for (std::size_t s = 0; s < integral_.size(); ++s) averages[s] = integral_[s] / time_;
      mean_rate = exit_integral_ / time_;
    } else {
      averages = current;
    }
    for (std::size_t b = 0; b < batch_time_.size(); ++b) {
      if (batch_time_[b] < 0.5 * width_) continue;
      std::vector<double> m(integral_.size());
      for (std::size_t s = 0; s < m.size(); ++s) m[s] = batch_integral_[b][s] / batch_time_[b];
      batch_means.push_back(std::move(m));
    }
  }

  double time() const { return time_; }

 private:
  double burn_in_;
  double width_ = 0.0;
  double time_ = 0.0;
  double exit_integral_ = 0.0;
  std::vector<double> integral_;
  std::vector<std::vector<double>> batch_integral_;
  std::vector<double> batch_time_;
};

}  // namespace ergmk::detail
