#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ergmk/graph.hpp"
#include "ergmk/potential.hpp"
#include "ergmk/process.hpp"
#include "ergmk/sim.hpp"

namespace ergmk {

/// Target of the quasi-time chain: either a process's equilibrium form or a
/// bare ERGM potential.
class TargetWeight {
 public:
  explicit TargetWeight(ProcessSpec process) : target_(std::move(process)) {}
  explicit TargetWeight(PotentialSpec potential) : target_(std::move(potential)) {}

  double log_weight(const Graph& g) const;
  double change(const Graph& g, Toggle t) const;
  void check(const Graph& g) const;

 private:
  std::variant<ProcessSpec, PotentialSpec> target_;
};

struct SamplerConfig {
  explicit SamplerConfig(TargetWeight t) : target(std::move(t)) {}

  TargetWeight target;
  int n = 1;
  bool directed = false;
  std::uint64_t burn_in_steps = 0;
  std::uint64_t thin = 1;
  std::uint64_t n_samples = 1;
  std::uint64_t seed = 0;
  std::vector<StatisticTerm> observables;  // empty: edges only
  std::optional<Graph> initial;
  /// Full log-weight recomputation period for the drift check.
  std::uint64_t resync_every = 1000;
  /// Keep the state index of every sample (small graphs only).
  bool record_states = false;
};

struct SampleSet {
  std::vector<std::string> stat_names;
  /// rows[k][s]: statistic s of sample k.
  std::vector<std::vector<double>> rows;
  std::vector<std::uint64_t> states;
  double acceptance_rate = 0.0;
  /// Largest |cached - recomputed| log weight seen at a resync.
  double max_drift = 0.0;

  std::vector<double> column(std::size_t s) const;
};

/// Metropolis chain over uniformly chosen toggles, acceptance
/// min(1, exp(change in log weight)).
SampleSet mcmc_sample(const SamplerConfig& config);

struct StatCheck {
  std::string name;
  double sim_mean = 0.0;
  double sim_se = 0.0;
  double mcmc_mean = 0.0;
  double mcmc_se = 0.0;
  double z = 0.0;
  bool flagged = false;
};

struct CrosscheckReport {
  std::vector<StatCheck> stats;
  bool passed = true;
};

/// z-scores between dwell-weighted simulation averages and MCMC means; any
/// |z| > threshold is flagged.
CrosscheckReport crosscheck(const Trajectory& sim, const SampleSet& samples, int batches = 20, double threshold = 4.0);

}  // namespace ergmk
