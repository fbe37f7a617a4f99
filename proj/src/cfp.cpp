#include "ergmk/cfp.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

#include "ergmk/errors.hpp"
#include "ergmk/stats.hpp"
#include "time_average.hpp"

namespace ergmk {

int cfp_focus_count(int n, double c, double gamma) {
  if (n < 1 || !(c > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("bad focus scaling");
  const double m = std::round(c * std::pow(static_cast<double>(n), 1.0 - gamma));
  return static_cast<int>(std::max(1.0, m));
}

void validate(const CfpParams& p) {
  auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
  if (!positive(p.r_m) || !positive(p.r_f) || !positive(p.r_d))
    throw std::invalid_argument("CFP rates must be positive and finite");
  if (p.M < 1) throw std::invalid_argument("CFP needs at least one focus");
}

void validate(const CfpState& s, const CfpParams& p) {
  validate(p);
  if (p.reciprocity && !s.graph.directed()) throw std::invalid_argument("CFPR needs a directed graph");
  if (s.foci.size() != static_cast<std::size_t>(s.graph.n()))
    throw std::invalid_argument("one focus per vertex required");
  for (int f : s.foci)
    if (f < 0 || f >= p.M) throw std::invalid_argument("focus out of range");
}

std::string to_string(CfpEventKind k) {
  switch (k) {
    case CfpEventKind::Migrate: return "migrate";
    case CfpEventKind::Form: return "form";
    case CfpEventKind::Dissolve: return "dissolve";
  }
  return "?";
}

double cfp_stream_rate(const CfpParams& p, int n, bool directed) {
  const double m = static_cast<double>(dyad_count(n, directed));
  return n * p.r_m + m * p.r_f * (p.reciprocity ? 2.0 : 1.0) + m * p.r_d;
}

namespace {

struct Streams {
  Streams(const CfpParams& p, const Graph& g)
      : toggles(toggle_table(g.n(), g.directed())),
        total(cfp_stream_rate(p, g.n(), g.directed())),
        migrate(g.n() * p.r_m),
        form(static_cast<double>(toggles.size()) * p.r_f),
        reverse(p.reciprocity ? form : 0.0) {
    if (g.directed()) {
      rev.reserve(toggles.size());
      for (const auto& t : toggles) rev.push_back(g.index_of({t.j, t.i}));
    }
  }

  /// One candidate from the superposed streams; false when it is thinned.
  bool propose(const CfpState& s, const CfpParams& p, Rng& rng, CfpEvent& ev, std::size_t& k) const {
    double u = rng.uniform() * total;
    if (u < migrate) {
      ev.kind = CfpEventKind::Migrate;
      ev.vertex = static_cast<int>(rng.below(static_cast<std::uint64_t>(s.graph.n())));
      ev.focus = static_cast<int>(rng.below(static_cast<std::uint64_t>(p.M)));
      return true;
    }
    u -= migrate;
    k = rng.below(toggles.size());
    ev.toggle = toggles[k];
    if (u < form) {
      ev.kind = CfpEventKind::Form;
      return s.colocated(ev.toggle);
    }
    u -= form;
    if (u < reverse) {
      ev.kind = CfpEventKind::Form;
      return s.graph.has(rev[k]);
    }
    ev.kind = CfpEventKind::Dissolve;
    return true;
  }

  std::vector<Toggle> toggles;
  std::vector<std::size_t> rev;
  double total, migrate, form, reverse;
};

void apply(CfpState& s, CfpEvent& ev, std::size_t k) {
  if (ev.kind == CfpEventKind::Migrate) {
    auto& f = s.foci[static_cast<std::size_t>(ev.vertex)];
    ev.changed = f != ev.focus;
    f = ev.focus;
    return;
  }
  const bool present = s.graph.has(k);
  ev.changed = (ev.kind == CfpEventKind::Form) != present;
  if (ev.changed) s.graph.flip(k);
}

}  // namespace

CfpStepResult cfp_step(CfpState& state, const CfpParams& params, Rng& rng) {
  validate(state, params);
  const Streams streams(params, state.graph);
  CfpStepResult out;
  std::size_t k = 0;
  while (true) {
    out.dt += rng.exponential(streams.total);
    if (streams.propose(state, params, rng, out.event, k)) break;
  }
  apply(state, out.event, k);
  return out;
}

double CfpRun::density_se() const { return standard_error(density_batches); }

double CfpRun::mean_degree() const { return density * static_cast<double>(final.graph.n() - 1); }

CfpRun cfp_simulate(const CfpConfig& config) {
  const auto& p = config.params;
  validate(config.initial, p);
  if (!(config.t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
  if (!std::isfinite(config.t_max) && config.max_events == 0)
    throw std::invalid_argument("an unbounded run needs an event cap");
  if (!(config.burn_in >= 0.0) || (std::isfinite(config.t_max) && config.burn_in >= config.t_max))
    throw std::invalid_argument("burn_in must lie in [0, t_max)");

  CfpState s = config.initial;
  const int n = s.graph.n();
  const bool directed = s.graph.directed();
  const Streams streams(p, s.graph);
  const std::size_t m = streams.toggles.size();
  const double dyads = directed ? static_cast<double>(m) / 2.0 : static_cast<double>(m);
  const std::uint64_t max_events = config.max_events;

  CfpRun out;
  Rng rng(config.seed);
  detail::TimeIntegrator integrator(2, config.burn_in, config.t_max, config.batches);
  auto window = [&](double t0, double t1) { return std::max(0.0, t1 - std::max(t0, config.burn_in)); };

  std::vector<double> counts{static_cast<double>(s.graph.edge_count()),
                             directed ? static_cast<double>(mutual_count(s.graph)) : 0.0};
  std::vector<double> on_since(m, 0.0), on_time(m, 0.0);
  std::vector<double> moved_at(static_cast<std::size_t>(n), 0.0);
  out.focus_occupancy.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(p.M), 0.0));
  double t = 0.0, t_edges = 0.0, t_state = 0.0;
  std::uint64_t key = config.track_states ? cfp_state_index(s, p.M) : 0;

  CfpEvent ev;
  std::size_t k = 0;
  while (true) {
    if (out.n_events >= max_events) {
      out.hit_event_cap = true;
      break;
    }
    const double dt = rng.exponential(streams.total);
    if (t + dt >= config.t_max) {
      t = config.t_max;
      break;
    }
    t += dt;
    ev = CfpEvent{};
    if (!streams.propose(s, p, rng, ev, k)) continue;
    ++out.n_events;
    const bool move = ev.kind == CfpEventKind::Migrate;
    const int from = move ? s.foci[static_cast<std::size_t>(ev.vertex)] : -1;
    const bool changes = move ? from != ev.focus : (ev.kind == CfpEventKind::Form) != s.graph.has(k);
    if (move) {
      ++out.migrations;
      if (!changes) ++out.self_migrations;
    } else if (!changes) {
      ev.kind == CfpEventKind::Form ? ++out.noop_formations : ++out.noop_dissolutions;
      continue;
    }
    if (!move) {
      integrator.add(t_edges, t, counts, streams.total);
      t_edges = t;
    }
    if (config.track_states && changes) {
      out.state_occupancy[key] += window(t_state, t);
      t_state = t;
    }
    apply(s, ev, k);

    if (ev.kind == CfpEventKind::Migrate) {
      const auto v = static_cast<std::size_t>(ev.vertex);
      out.focus_occupancy[v][static_cast<std::size_t>(from)] += window(moved_at[v], t);
      moved_at[v] = t;
    } else {
      const bool add = ev.kind == CfpEventKind::Form;
      add ? ++out.formations : ++out.dissolutions;
      counts[0] += add ? 1.0 : -1.0;
      if (directed && s.graph.has(streams.rev[k])) counts[1] += add ? 1.0 : -1.0;
      if (add) on_since[k] = t;
      else on_time[k] += window(on_since[k], t);
    }
    if (config.track_states && changes) key = cfp_state_index(s, p.M);
    if (config.record_events) {
      CfpLogEntry e;
      e.t = t;
      e.kind = ev.kind;
      if (ev.kind == CfpEventKind::Migrate) {
        e.i = ev.vertex;
        e.focus = ev.focus;
      } else {
        e.i = ev.toggle.i;
        e.j = ev.toggle.j;
        e.add = ev.kind == CfpEventKind::Form;
      }
      out.log.push_back(e);
    }
  }

  out.sim_time = t;
  integrator.add(t_edges, t, counts, streams.total);
  if (config.track_states) out.state_occupancy[key] += window(t_state, t);
  const double span = window(0.0, t);

  std::vector<double> avg;
  std::vector<std::vector<double>> batches;
  double unused = 0.0;
  integrator.finish(avg, batches, unused, counts);
  out.density = avg[0] / static_cast<double>(m);
  out.mutual_dyads = directed ? avg[1] / dyads : 0.0;
  for (const auto& b : batches) {
    out.density_batches.push_back(b[0] / static_cast<double>(m));
    if (directed) out.mutual_batches.push_back(b[1] / dyads);
  }
  if (directed) {
    out.p_given_reverse = avg[0] > 0.0 ? 2.0 * avg[1] / avg[0] : 0.0;
    const double md = static_cast<double>(m) - avg[0];
    out.p_given_no_reverse = md > 0.0 ? (avg[0] - 2.0 * avg[1]) / md : 0.0;
  }

  out.edge_occupancy.assign(m, 0.0);
  for (std::size_t e = 0; e < m; ++e) {
    double on = on_time[e];
    if (s.graph.has(e)) on += window(on_since[e], t);
    out.edge_occupancy[e] = span > 0.0 ? on / span : (s.graph.has(e) ? 1.0 : 0.0);
  }
  for (std::size_t v = 0; v < static_cast<std::size_t>(n); ++v) {
    out.focus_occupancy[v][static_cast<std::size_t>(s.foci[v])] += window(moved_at[v], t);
    for (auto& x : out.focus_occupancy[v]) x = span > 0.0 ? x / span : 0.0;
  }
  if (span > 0.0)
    for (auto& [_, occ] : out.state_occupancy) occ /= span;
  out.final = std::move(s);
  return out;
}

std::vector<CfpRun> cfp_ensemble(const CfpConfig& config, int replicates) {
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  std::vector<CfpRun> out(static_cast<std::size_t>(replicates));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < replicates; ++k) {
    try {
      CfpConfig c = config;
      c.seed = derive_seed(config.seed, static_cast<std::uint64_t>(k));
      out[static_cast<std::size_t>(k)] = cfp_simulate(c);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::uint64_t cfp_state_index(const CfpState& s, int M) {
  std::uint64_t f = 0;
  for (auto v = s.foci.size(); v-- > 0;) f = f * static_cast<std::uint64_t>(M) + static_cast<std::uint64_t>(s.foci[v]);
  return s.graph.state_index() + (f << s.graph.num_dyads());
}

CfpState cfp_state_from_index(std::uint64_t index, int n, bool directed, int M) {
  const std::size_t m = dyad_count(n, directed);
  const std::uint64_t mask = m == 64 ? ~0ull : (std::uint64_t{1} << m) - 1;
  CfpState s(Graph::from_state_index(n, directed, index & mask), std::vector<int>(static_cast<std::size_t>(n)));
  std::uint64_t f = m == 64 ? 0 : index >> m;
  for (auto& x : s.foci) {
    x = static_cast<int>(f % static_cast<std::uint64_t>(M));
    f /= static_cast<std::uint64_t>(M);
  }
  return s;
}

RateMatrix cfp_rate_matrix(const CfpParams& params, int n, bool directed, std::size_t max_dyads) {
  validate(params);
  if (params.reciprocity && !directed) throw std::invalid_argument("CFPR needs a directed graph");
  const std::size_t m = dyad_count(n, directed);
  double log2_size = static_cast<double>(m) + n * std::log2(static_cast<double>(params.M));
  if (log2_size > static_cast<double>(max_dyads) + 1e-9)
    throw CapExceeded("CFP product space has 2^" + std::to_string(log2_size) + " states, above the cap 2^" +
                      std::to_string(max_dyads));
  std::size_t size = std::size_t{1} << m;
  for (int v = 0; v < n; ++v) size *= static_cast<std::size_t>(params.M);

  const Graph probe(n, directed);
  const auto toggles = toggle_table(n, directed);
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(size);
  for (std::size_t a = 0; a < size; ++a) {
    const CfpState s = cfp_state_from_index(a, n, directed, params.M);
    auto& row = rows[a];
    for (int v = 0; v < n; ++v) {
      for (int f = 0; f < params.M; ++f) {
        if (f == s.foci[static_cast<std::size_t>(v)]) continue;
        CfpState b = s;
        b.foci[static_cast<std::size_t>(v)] = f;
        row.emplace_back(static_cast<std::uint32_t>(cfp_state_index(b, params.M)), params.r_m / params.M);
      }
    }
    for (std::size_t k = 0; k < m; ++k) {
      const auto b = static_cast<std::uint32_t>(a ^ (std::size_t{1} << k));
      if (s.graph.has(k)) {
        row.emplace_back(b, params.r_d);
        continue;
      }
      const Toggle t = toggles[k];
      double r = s.colocated(t) ? params.r_f : 0.0;
      if (params.reciprocity && s.graph.has(probe.index_of({t.j, t.i}))) r += params.r_f;
      if (r > 0.0) row.emplace_back(b, r);
    }
  }
  return RateMatrix::from_rows(rows);
}

namespace {

// Stationary weights of the limiting dyad chain relative to the null dyad.
void dyad_weights(const CfpParams& p, double& asym, double& mutual) {
  asym = p.r_f / (p.M * p.r_d);
  mutual = p.reciprocity ? asym * p.r_f * (1.0 + 1.0 / p.M) / p.r_d : asym * asym;
}

}  // namespace

double cfp_limit_density(const CfpParams& p) {
  validate(p);
  double x, y;
  dyad_weights(p, x, y);
  return (x + y) / (1.0 + 2.0 * x + y);
}

double cfp_limit_mutual_fraction(const CfpParams& p) {
  validate(p);
  double x, y;
  dyad_weights(p, x, y);
  return y / (1.0 + 2.0 * x + y);
}

CfpFastMixingReport cfp_fast_mixing_check(const CfpCheckConfig& config) {
  const auto& p = config.params;
  validate(p);
  CfpFastMixingReport rep;
  rep.ratio = p.r_m / std::max(p.r_f, p.r_d);
  if (config.min_ratio > 0.0 && rep.ratio < config.min_ratio)
    throw std::invalid_argument("migration rate ratio " + std::to_string(rep.ratio) + " is below the fast-mixing floor " +
                                std::to_string(config.min_ratio));
  if (!(config.horizon > config.burn_in)) throw std::invalid_argument("horizon must exceed burn_in");

  CfpConfig sim;
  sim.params = p;
  sim.initial = CfpState(config.n, config.directed);
  Rng init(derive_seed(config.seed, 0));
  for (auto& f : sim.initial.foci) f = static_cast<int>(init.below(static_cast<std::uint64_t>(p.M)));
  sim.t_max = config.horizon;
  sim.max_events = std::numeric_limits<std::uint64_t>::max();
  sim.burn_in = config.burn_in;
  sim.seed = config.seed;
  sim.batches = config.batches;
  const CfpRun run = cfp_simulate(sim);

  const double n = config.n;
  rep.density = run.density;
  rep.density_se = run.density_se();
  rep.predicted_density = cfp_limit_density(p);
  auto zscore = [](double x, double mu, double se) {
    const double d = x - mu;
    return se > 0.0 ? d / se : (d == 0.0 ? 0.0 : std::copysign(INFINITY, d));
  };
  rep.density_z = zscore(rep.density, rep.predicted_density, rep.density_se);

  // off -> on rate matching the limiting marginal, on -> off at r_d
  const double pp = rep.predicted_density;
  const double on_rate = p.r_d * pp / (1.0 - pp);
  const double span = config.horizon - config.burn_in;
  const double expected = 2.0 * pp * (1.0 - pp) / ((on_rate + p.r_d) * span);
  rep.dispersion = variance(run.edge_occupancy) / expected;

  const double c = p.M / n;
  rep.limit_theta = std::log(p.r_f / (c * p.r_d));
  if (p.reciprocity) {
    rep.mutual_fraction = run.mutual_dyads;
    rep.mutual_se = standard_error(run.mutual_batches);
    rep.predicted_mutual_fraction = cfp_limit_mutual_fraction(p);
    rep.mutual_z = zscore(rep.mutual_fraction, rep.predicted_mutual_fraction, rep.mutual_se);
    const double asym = rep.density - rep.mutual_fraction;
    const double null = 1.0 - 2.0 * asym - rep.mutual_fraction;
    rep.implied_theta = std::log(asym / null) + std::log(n);
    rep.implied_theta_m = std::log(rep.mutual_fraction * null / (asym * asym)) - std::log(n);
    rep.limit_theta_m = std::log(c * (1.0 + 1.0 / p.M));
  } else {
    rep.implied_theta = std::log(rep.density / (1.0 - rep.density)) + std::log(n);
    rep.implied_theta_se = rep.density_se / (rep.density * (1.0 - rep.density));
  }
  rep.p_given_reverse = run.p_given_reverse;
  rep.p_given_no_reverse = run.p_given_no_reverse;

  rep.departure = !(std::abs(rep.density_z) <= config.z_threshold) ||
                  !(rep.dispersion <= config.dispersion_threshold) ||
                  (p.reciprocity && !(std::abs(rep.mutual_z) <= config.z_threshold));
  return rep;
}

std::vector<DegreeScalingRow> cfp_degree_scaling(CfpCheckConfig base, double c, double gamma,
                                                 const std::vector<int>& sizes) {
  std::vector<DegreeScalingRow> out;
  const std::uint64_t seed = base.seed;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    base.n = sizes[i];
    base.params.M = cfp_focus_count(sizes[i], c, gamma);
    base.seed = derive_seed(seed, i + 1);
    const auto rep = cfp_fast_mixing_check(base);
    DegreeScalingRow row;
    row.n = sizes[i];
    row.M = base.params.M;
    row.mean_degree = rep.density * (sizes[i] - 1);
    row.se = rep.density_se * (sizes[i] - 1);
    row.predicted = rep.predicted_density * (sizes[i] - 1);
    out.push_back(row);
  }
  return out;
}

}  // namespace ergmk
