#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ergmk/graph.hpp"
#include "ergmk/process.hpp"
#include "ergmk/rng.hpp"

namespace ergmk {

enum class RecordMode {
  FullEvents,      // (t, toggle, add) per event
  StatisticsOnly,  // (t, statistics) per event
  TimeAverages,    // summaries only
};

enum class RunStatus { TimeLimit, EventCap, Absorbing };

struct SimConfig {
  ProcessSpec process;
  Graph initial;
  /// Infinity means no time limit; then max_events alone stops the run.
  double t_max = std::numeric_limits<double>::infinity();
  std::uint64_t max_events = 0;
  std::uint64_t seed = 0;
  RecordMode record = RecordMode::FullEvents;
  /// Time excluded from averages.
  double burn_in = 0.0;
  /// Empty means default_observables(process).
  std::vector<StatisticTerm> observables;
  /// Equal-time batches over [burn_in, t_max] for standard errors.
  int batches = 20;
  /// Incremental rate caches are checked against a full rescan this often.
  std::uint64_t coherence_interval = 1000;
  /// false: full rescan after every event (baseline path).
  bool incremental = true;
  /// Keep per-state occupancy and dwell records.
  bool track_states = false;
};

void validate(const SimConfig& config);

struct Event {
  double t = 0.0;
  Toggle toggle;
  bool add = false;
};

struct StatSnapshot {
  double t = 0.0;
  std::vector<double> stats;
};

struct StateRecord {
  /// Post-burn-in time spent in the state, including a truncated final stay.
  double occupancy = 0.0;
  /// Completed holding times only.
  double dwell_total = 0.0;
  std::uint64_t dwell_count = 0;
  double exit_rate = 0.0;
};

struct DwellSample {
  double dwell = 0.0;
  double exit_rate = 0.0;
};

struct Trajectory {
  Graph initial;
  Graph final;
  std::vector<Event> events;
  std::vector<StatSnapshot> snapshots;
  std::vector<std::string> stat_names;
  std::vector<double> time_averaged_stats;
  /// batch_means[b][s]: time average of statistic s over batch b.
  std::vector<std::vector<double>> batch_means;
  /// Keyed by Graph::hash() (the exact state index when it fits in 64 bits).
  std::map<std::uint64_t, StateRecord> states;
  std::vector<DwellSample> dwells;
  RunStatus status = RunStatus::TimeLimit;
  std::uint64_t n_events = 0;
  double sim_time = 0.0;
  /// Time-weighted mean exit rate over the averaging window.
  double mean_exit_rate = 0.0;
  double max_coherence_error = 0.0;
  /// Completed post-burn-in stays: sum of holding times, of their expected
  /// values 1/exit_rate, and of squared differences.
  std::uint64_t stays = 0;
  double dwell_sum = 0.0;
  double expected_dwell_sum = 0.0;
  double dwell_residual_sq = 0.0;

  double events_per_unit_time() const { return sim_time > 0.0 ? n_events / sim_time : 0.0; }
  /// Standard error of each time-averaged statistic from the batch means.
  std::vector<double> standard_errors() const;
};

struct StepResult {
  double dt = 0.0;
  Toggle toggle;
};

/// One Gillespie draw from g: dt ~ Exp(exit rate), toggle ~ rate / exit rate.
/// Throws AbsorbingState when the exit rate is zero.
StepResult step(const ProcessSpec& process, const Graph& g, Rng& rng);

Trajectory simulate(const SimConfig& config);

/// Replicate k runs with seed derive_seed(config.seed, k).
Trajectory replicate(const SimConfig& config, std::uint64_t k);
std::vector<Trajectory> ensemble(const SimConfig& config, int replicates);
std::vector<Trajectory> ensemble_serial(const SimConfig& config, int replicates);

/// Durations of presence spells that both began and ended inside the run.
/// Needs a FullEvents trajectory.
std::vector<double> edge_lifetimes(const Trajectory& traj);

std::string to_string(RunStatus s);

}  // namespace ergmk
