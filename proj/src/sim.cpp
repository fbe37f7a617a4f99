#include "ergmk/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ergmk/errors.hpp"
#include "ergmk/kernels.hpp"
#include "ergmk/stats.hpp"
#include "time_average.hpp"

namespace ergmk {

namespace {

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

std::size_t pick(Rng& rng, const std::vector<double>& rates, double total) {
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last = rates.size();
  for (std::size_t k = 0; k < rates.size(); ++k) {
    if (rates[k] <= 0.0) continue;
    acc += rates[k];
    last = k;
    if (u < acc) return k;
  }
  return last;  // rounding left u at the very top
}

// Per-toggle rates for the current state, kept in sync with the graph either
// by full rescans or by recomputing only the change scores a toggle can touch.
class RateState {
 public:
  RateState(const ProcessSpec& spec, const Graph& g, bool incremental)
      : spec_(spec),
        g_(g),
        toggles_(toggle_table(g.n(), g.directed())),
        incremental_(incremental),
        reach_(process_reach(spec)) {
    rates_.resize(toggles_.size());
    if (reach_ == Reach::Incident) {
      incident_.resize(static_cast<std::size_t>(g.n()));
      for (std::size_t k = 0; k < toggles_.size(); ++k) {
        incident_[toggles_[k].i].push_back(k);
        incident_[toggles_[k].j].push_back(k);
      }
    }
    rescan();
  }

  const Graph& graph() const { return g_; }
  const std::vector<double>& rates() const { return rates_; }
  const std::vector<Toggle>& toggles() const { return toggles_; }
  double total() const { return total_; }

  void apply(std::size_t k) {
    if (spec_.needs_source_potential()) source_ += cache_.delta[k];
    g_.flip(k);
    if (!incremental_) {
      rescan();
      return;
    }
    dirty_.clear();
    dirty_.push_back(k);
    const Toggle t = toggles_[k];
    if (reach_ == Reach::Reverse && g_.directed()) {
      dirty_.push_back(g_.index_of({t.j, t.i}));
    } else if (reach_ == Reach::Incident) {
      dirty_.insert(dirty_.end(), incident_[t.i].begin(), incident_[t.i].end());
      dirty_.insert(dirty_.end(), incident_[t.j].begin(), incident_[t.j].end());
    }
    kernels::update_deltas(spec_, g_, toggles_, dirty_, cache_);
    if (spec_.needs_source_potential()) {
      for (std::size_t j = 0; j < toggles_.size(); ++j) rates_[j] = rate_at(j);
    } else {
      for (auto j : dirty_) rates_[j] = rate_at(j);
    }
    sum();
  }

  /// Compares the cached rates with a fresh scan, then resynchronises.
  double coherence_error() {
    std::vector<double> fresh(toggles_.size());
    kernels::scan_rates(spec_, g_, toggles_, fresh);
    double worst = 0.0;
    for (std::size_t k = 0; k < fresh.size(); ++k) worst = std::max(worst, relative_gap(rates_[k], fresh[k]));
    rescan();
    return worst;
  }

 private:
  double rate_at(std::size_t k) const {
    return rate_from_inputs(spec_, kernels::inputs_at(spec_, g_, cache_, k, source_));
  }

  void rescan() {
    kernels::compute_deltas(spec_, g_, toggles_, cache_);
    source_ = source_potential(spec_, g_);
    for (std::size_t k = 0; k < toggles_.size(); ++k) rates_[k] = rate_at(k);
    sum();
  }

  void sum() { total_ = std::accumulate(rates_.begin(), rates_.end(), 0.0); }

  const ProcessSpec& spec_;
  Graph g_;
  std::vector<Toggle> toggles_;
  bool incremental_;
  Reach reach_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<std::size_t> dirty_;
  kernels::DeltaCache cache_;
  double source_ = 0.0;
  std::vector<double> rates_;
  double total_ = 0.0;
};

}  // namespace

void validate(const SimConfig& config) {
  validate(config.process, config.initial);
  const bool timed = config.t_max > 0.0 && std::isfinite(config.t_max);
  if (!(config.t_max > 0.0)) throw std::invalid_argument("t_max must be positive (or infinite)");
  if (!timed && config.max_events == 0)
    throw std::invalid_argument("an untimed run needs max_events > 0");
  if (config.burn_in < 0.0 || (timed && !(config.burn_in < config.t_max)))
    throw std::invalid_argument("burn_in must lie in [0, t_max)");
  if (config.batches < 0) throw std::invalid_argument("batches must be non-negative");
  for (const auto& t : config.observables) check_compatible(t, config.initial);
}

std::vector<double> Trajectory::standard_errors() const {
  std::vector<double> out(time_averaged_stats.size(), 0.0);
  for (std::size_t s = 0; s < out.size(); ++s) {
    std::vector<double> col;
    for (const auto& b : batch_means) col.push_back(b[s]);
    out[s] = standard_error(col);
  }
  return out;
}

StepResult step(const ProcessSpec& process, const Graph& g, Rng& rng) {
  validate(process, g);
  const auto toggles = toggle_table(g.n(), g.directed());
  std::vector<double> rates(toggles.size());
  kernels::scan_rates(process, g, toggles, rates);
  const double total = std::accumulate(rates.begin(), rates.end(), 0.0);
  if (!(total > 0.0)) throw AbsorbingState("exit rate is zero");
  const double dt = rng.exponential(total);
  return {dt, toggles[pick(rng, rates, total)]};
}

Trajectory simulate(const SimConfig& config) {
  validate(config);
  const auto observables =
      config.observables.empty() ? default_observables(config.process) : config.observables;

  Trajectory out;
  out.initial = config.initial;
  for (const auto& t : observables) out.stat_names.push_back(t.name());

  Rng rng(config.seed);
  RateState state(config.process, config.initial, config.incremental);
  auto stats = statistics(observables, config.initial);
  detail::TimeIntegrator integrator(stats.size(), config.burn_in, config.t_max, config.batches);

  double t = 0.0;
  while (true) {
    if (out.n_events >= config.max_events) {
      out.status = RunStatus::EventCap;
      break;
    }
    const double total = state.total();
    if (!(total > 0.0)) {
      out.status = RunStatus::Absorbing;
      break;
    }
    const double dt = rng.exponential(total);
    const std::size_t k = pick(rng, state.rates(), total);
    const auto key = state.graph().hash();

    if (t + dt >= config.t_max) {
      const double in_window = integrator.add(t, config.t_max, stats, total);
      if (config.track_states) {
        auto& rec = out.states[key];
        rec.occupancy += in_window;
        rec.exit_rate = total;
      }
      t = config.t_max;
      out.status = RunStatus::TimeLimit;
      break;
    }

    const double in_window = integrator.add(t, t + dt, stats, total);
    if (t >= config.burn_in) {
      ++out.stays;
      out.dwell_sum += dt;
      out.expected_dwell_sum += 1.0 / total;
      out.dwell_residual_sq += (dt - 1.0 / total) * (dt - 1.0 / total);
    }
    if (config.track_states) {
      auto& rec = out.states[key];
      rec.occupancy += in_window;
      rec.dwell_total += dt;
      ++rec.dwell_count;
      rec.exit_rate = total;
      out.dwells.push_back({dt, total});
    }
    t += dt;

    const Toggle tg = state.toggles()[k];
    const bool add = !state.graph().has(k);
    for (std::size_t s = 0; s < observables.size(); ++s)
      stats[s] += term_change(observables[s], state.graph(), tg);
    state.apply(k);
    ++out.n_events;

    if (config.record == RecordMode::FullEvents) out.events.push_back({t, tg, add});
    else if (config.record == RecordMode::StatisticsOnly) out.snapshots.push_back({t, stats});

    if (config.incremental && config.coherence_interval > 0 &&
        out.n_events % config.coherence_interval == 0) {
      const double err = state.coherence_error();
      out.max_coherence_error = std::max(out.max_coherence_error, err);
      if (err > 1e-9) throw std::logic_error("incremental rate cache drifted from a full rescan");
    }
  }

  out.sim_time = t;
  out.final = state.graph();
  integrator.finish(out.time_averaged_stats, out.batch_means, out.mean_exit_rate, stats);
  return out;
}

Trajectory replicate(const SimConfig& config, std::uint64_t k) {
  SimConfig c = config;
  c.seed = derive_seed(config.seed, k);
  return simulate(c);
}

std::vector<Trajectory> ensemble(const SimConfig& config, int replicates) {
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  validate(config);
  std::vector<Trajectory> out(static_cast<std::size_t>(replicates));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < replicates; ++k) {
    try {
      out[static_cast<std::size_t>(k)] = replicate(config, static_cast<std::uint64_t>(k));
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<Trajectory> ensemble_serial(const SimConfig& config, int replicates) {
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  std::vector<Trajectory> out;
  out.reserve(static_cast<std::size_t>(replicates));
  for (int k = 0; k < replicates; ++k) out.push_back(replicate(config, static_cast<std::uint64_t>(k)));
  return out;
}

std::vector<double> edge_lifetimes(const Trajectory& traj) {
  if (traj.events.size() != traj.n_events)
    throw std::invalid_argument("edge lifetimes need a full event log");
  const Graph& g0 = traj.initial;
  std::vector<double> born(g0.num_dyads(), -1.0);
  std::vector<double> out;
  for (const auto& e : traj.events) {
    const auto k = g0.index_of(e.toggle);
    if (e.add) {
      born[k] = e.t;
    } else if (born[k] >= 0.0) {
      out.push_back(e.t - born[k]);
      born[k] = -1.0;
    }
  }
  return out;
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::TimeLimit: return "time_limit";
    case RunStatus::EventCap: return "event_cap";
    case RunStatus::Absorbing: return "absorbing";
  }
  return "unknown";
}

}  // namespace ergmk
