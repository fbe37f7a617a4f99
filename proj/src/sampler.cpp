#include "ergmk/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ergmk/rng.hpp"
#include "ergmk/stats.hpp"

namespace ergmk {

double TargetWeight::log_weight(const Graph& g) const {
  if (const auto* p = std::get_if<ProcessSpec>(&target_)) return equilibrium_log_weight(*p, g);
  return potential(std::get<PotentialSpec>(target_), g);
}

double TargetWeight::change(const Graph& g, Toggle t) const {
  if (const auto* p = std::get_if<ProcessSpec>(&target_)) return equilibrium_log_weight_change(*p, g, t);
  return change_score_unchecked(std::get<PotentialSpec>(target_), g, t);
}

void TargetWeight::check(const Graph& g) const {
  if (const auto* p = std::get_if<ProcessSpec>(&target_)) validate(*p, g);
  else check_compatible(std::get<PotentialSpec>(target_), g);
}

std::vector<double> SampleSet::column(std::size_t s) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[s]);
  return out;
}

SampleSet mcmc_sample(const SamplerConfig& config) {
  if (config.thin < 1) throw std::invalid_argument("thin must be >= 1");
  if (config.n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  Graph g = config.initial ? *config.initial : Graph(config.n, config.directed);
  if (g.n() != config.n || g.directed() != config.directed)
    throw std::invalid_argument("initial graph does not match the sampler support");
  config.target.check(g);
  const auto observables =
      config.observables.empty() ? std::vector<StatisticTerm>{StatisticTerm::edges()} : config.observables;
  for (const auto& t : observables) check_compatible(t, g);

  SampleSet out;
  for (const auto& t : observables) out.stat_names.push_back(t.name());
  out.rows.reserve(config.n_samples);

  const auto toggles = toggle_table(g.n(), g.directed());
  Rng rng(config.seed);
  auto stats = statistics(observables, g);
  double logw = config.target.log_weight(g);
  std::uint64_t accepted = 0;
  const std::uint64_t total = config.burn_in_steps + config.thin * config.n_samples;

  for (std::uint64_t it = 1; it <= total; ++it) {
    const Toggle t = toggles[rng.below(toggles.size())];
    const double d = config.target.change(g, t);
    if (d >= 0.0 || rng.uniform() < std::exp(d)) {
      for (std::size_t s = 0; s < observables.size(); ++s) stats[s] += term_change(observables[s], g, t);
      g.flip(g.index_of(t));
      logw += d;
      ++accepted;
    }
    if (config.resync_every > 0 && it % config.resync_every == 0) {
      const double fresh = config.target.log_weight(g);
      out.max_drift = std::max(out.max_drift, std::abs(fresh - logw));
      logw = fresh;
    }
    if (it > config.burn_in_steps && (it - config.burn_in_steps) % config.thin == 0) {
      out.rows.push_back(stats);
      if (config.record_states) out.states.push_back(g.state_index());
    }
  }
  out.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(total);
  return out;
}

CrosscheckReport crosscheck(const Trajectory& sim, const SampleSet& samples, int batches, double threshold) {
  if (sim.stat_names != samples.stat_names)
    throw std::invalid_argument("simulation and sampler report different statistics");
  if (sim.batch_means.size() < 2) throw std::invalid_argument("simulation has too few batches for a standard error");
  CrosscheckReport rep;
  const auto sim_se = sim.standard_errors();
  for (std::size_t s = 0; s < sim.stat_names.size(); ++s) {
    StatCheck c;
    c.name = sim.stat_names[s];
    c.sim_mean = sim.time_averaged_stats[s];
    c.sim_se = sim_se[s];
    const auto col = samples.column(s);
    c.mcmc_mean = mean(col);
    c.mcmc_se = standard_error(batch_means(col, batches));
    const double se = std::hypot(c.sim_se, c.mcmc_se);
    const double diff = c.sim_mean - c.mcmc_mean;
    c.z = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff));
    c.flagged = std::abs(c.z) > threshold;
    rep.passed = rep.passed && !c.flagged;
    rep.stats.push_back(c);
  }
  return rep;
}

}  // namespace ergmk
