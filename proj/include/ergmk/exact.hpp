#pragma once

#include <cstddef>
#include <vector>

#include "ergmk/process.hpp"
#include "ergmk/state_space.hpp"

namespace ergmk {

/// Solved versus analytic stationary distribution over an enumerated space.
struct StationaryReport {
  std::vector<double> pi_solved;
  std::vector<double> pi_analytic;
  double tv_distance = 0.0;
  double max_rel_error = 0.0;
  /// max_a |(pi^T R)_a| / max_a |R_aa|
  double residual = 0.0;
  double log_Z = 0.0;
  std::size_t states = 0;
};

/// Dense LU is used up to this many states.
inline constexpr std::size_t kDenseSolveLimit = 4096;

RateMatrix build_rate_matrix(const ProcessSpec& spec, const StateSpace& space);

/// Number of strongly connected components of the positive pattern.
int strongly_connected_components(const RateMatrix& r);

/// Unique pi with pi^T R = 0 and sum(pi) = 1. Throws ReducibleChain when the
/// positive pattern is not strongly connected.
std::vector<double> solve_stationary(const RateMatrix& r);

/// Normalised exp(equilibrium_log_weight) over the space; log Z via `log_z`.
std::vector<double> analytic_equilibrium(const ProcessSpec& spec, const StateSpace& space,
                                         double* log_z = nullptr);

StationaryReport compare_equilibrium(const ProcessSpec& spec, const StateSpace& space);

/// p0^T P(t) by uniformisation (rate 1.05 max exit, Poisson tail < 1e-12).
std::vector<double> transient_distribution(const RateMatrix& r, const std::vector<double>& p0, double t);

/// Max deviation between pi and the normalised pi~_s / u_s of the jump chain.
double embedded_chain_check(const RateMatrix& r);
double embedded_chain_check(const ProcessSpec& spec, const StateSpace& space);

double total_variation(const std::vector<double>& p, const std::vector<double>& q);

/// max_a |(pi^T R)_a| / max_a |R_aa|.
double stationary_residual(const RateMatrix& r, const std::vector<double>& pi);

/// max_a |sum_b pi_b R_ba + pi_a R_aa| / (pi_a |R_aa|): influx against outflux.
double global_balance_error(const RateMatrix& r, const std::vector<double>& pi);

/// max over adjacent pairs of |pi_a R_ab - pi_b R_ba| / max(pi_a R_ab, pi_b R_ba).
double detailed_balance_error(const RateMatrix& r, const std::vector<double>& pi);

/// Marginal presence probability of every edge variable.
std::vector<double> edge_marginals(const StateSpace& space, const std::vector<double>& pi);

}  // namespace ergmk
