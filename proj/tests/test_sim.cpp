#include <doctest.h>

#include <cmath>

#include "ergmk/errors.hpp"
#include "ergmk/exact.hpp"
#include "ergmk/sim.hpp"
#include "ergmk/stats.hpp"
#include "support.hpp"

using namespace ergmk;
using namespace ergmk::testing;

namespace {

SimConfig base(const ProcessSpec& p, int n, bool directed) {
  SimConfig c;
  c.process = p;
  c.initial = Graph(n, directed);
  c.max_events = 1u << 30;
  return c;
}

ProcessSpec triangle_model(Family f) {
  ProcessSpec p = edges_only(f, -0.4, 1.5);
  const PotentialSpec q({StatisticTerm::edges(), StatisticTerm::triangles()}, {-0.4, 0.6});
  if (p.potential) p.potential = q;
  if (p.formation) p.formation = q;
  if (p.dissolution) p.dissolution = PotentialSpec({StatisticTerm::edges(), StatisticTerm::triangles()}, {0.3, -0.2});
  if (p.theta_d) p.theta_d = 0.4;
  if (p.theta_f) p.theta_f = -0.3;
  return p;
}

}  // namespace

TEST_CASE("zero events leaves the initial graph") {
  SimConfig c = base(edges_only(Family::LERGM, 0.0), 4, false);
  c.max_events = 0;
  c.t_max = 10.0;
  const Trajectory t = simulate(c);
  CHECK(t.n_events == 0);
  CHECK(t.events.empty());
  CHECK(t.final == t.initial);
  CHECK(t.status == RunStatus::EventCap);
}

TEST_CASE("untimed runs need an event cap") {
  SimConfig c = base(edges_only(Family::LERGM, 0.0), 4, false);
  c.max_events = 0;
  CHECK_THROWS_AS(simulate(c), std::invalid_argument);
  c.max_events = 10;
  c.t_max = 5.0;
  c.burn_in = 6.0;
  CHECK_THROWS_AS(simulate(c), std::invalid_argument);
}

TEST_CASE("event log replays to the final graph with increasing times") {
  Gen gen(61);
  for (Family f : kAllFamilies) {
    const bool directed = f == Family::CompetingRateSAOM || gen.coin();
    const int n = gen.integer(3, 6);
    SimConfig c = base(gen.process(f, n, directed, 0.5), n, directed);
    c.initial = gen.graph(n, directed);
    c.max_events = 2000;
    c.seed = gen.rng.bits();
    const Trajectory t = simulate(c);
    Graph g = t.initial;
    double last = 0.0;
    for (const auto& e : t.events) {
      CHECK(e.t > last);
      last = e.t;
      CHECK(e.add == !g.has_edge(e.toggle.i, e.toggle.j));
      g.toggle(e.toggle);
    }
    CHECK(g == t.final);
    CHECK(t.max_coherence_error <= 1e-9);
  }
}

TEST_CASE("same seed, same trajectory") {
  SimConfig c = base(triangle_model(Family::LERGM), 5, false);
  c.t_max = 50.0;
  c.seed = 99;
  const Trajectory a = simulate(c);
  const Trajectory b = simulate(c);
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t k = 0; k < a.events.size(); ++k) {
    CHECK(a.events[k].t == b.events[k].t);
    CHECK(a.events[k].toggle == b.events[k].toggle);
  }
  c.seed = 100;
  const Trajectory d = simulate(c);
  CHECK((d.events.size() != a.events.size() || d.events.front().t != a.events.front().t));
}

TEST_CASE("incremental caches reproduce the full-rescan path") {
  for (Family f : {Family::LERGM, Family::ChangeInhibition, Family::GeneralCSTERGM, Family::CTERGM}) {
    SimConfig c = base(triangle_model(f), 6, false);
    c.max_events = 5000;
    c.seed = 7;
    c.coherence_interval = 100;
    const Trajectory inc = simulate(c);
    c.incremental = false;
    const Trajectory full = simulate(c);
    REQUIRE(inc.events.size() == full.events.size());
    bool same = true;
    for (std::size_t k = 0; k < inc.events.size(); ++k)
      same = same && inc.events[k].t == full.events[k].t && inc.events[k].toggle == full.events[k].toggle;
    CHECK(same);
    CHECK(inc.max_coherence_error <= 1e-9);
  }
}

TEST_CASE("step: uniform toggles under flat differential stability") {
  const ProcessSpec s = edges_only(Family::DifferentialStability, 0.0);
  const Graph g(3, false);
  Rng rng(5);
  const int draws = 100000;
  std::vector<int> hits(3, 0);
  double dt_sum = 0.0;
  for (int k = 0; k < draws; ++k) {
    const auto r = step(s, g, rng);
    dt_sum += r.dt;
    ++hits[g.index_of(r.toggle)];
  }
  const double se_p = std::sqrt((1.0 / 3) * (2.0 / 3) / draws);
  for (int h : hits) CHECK(std::abs(h / double(draws) - 1.0 / 3) < 3 * se_p);
  // exit rate 1, so dt ~ Exp(1) with sd 1
  CHECK(std::abs(dt_sum / draws - 1.0) < 3.0 / std::sqrt(draws));
}

TEST_CASE("step: toggle frequencies follow rate ratios") {
  const double theta = 0.8;
  const ProcessSpec s = edges_only(Family::LERGM, theta);
  Graph g(2, true);
  g.set_edge(0, 1, true);  // removing it is downhill, adding 1->0 uphill
  const double up = logistic(theta), down = logistic(-theta);
  const double p_up = up / (up + down);
  Rng rng(6);
  const int draws = 100000;
  int ups = 0;
  for (int k = 0; k < draws; ++k) ups += step(s, g, rng).toggle == Toggle{1, 0};
  CHECK(std::abs(ups / double(draws) - p_up) < 3 * std::sqrt(p_up * (1 - p_up) / draws));
}

TEST_CASE("absorbing states stop the run") {
  const ProcessSpec s = edges_only(Family::CTERGM, -1e4);
  SimConfig c = base(s, 3, false);
  c.t_max = 10.0;
  const Trajectory t = simulate(c);
  CHECK(t.status == RunStatus::Absorbing);
  CHECK(t.n_events == 0);
  Rng rng(1);
  CHECK_THROWS_AS(step(s, Graph(3, false), rng), AbsorbingState);
}

TEST_CASE("holding times are exponential with mean 1/exit rate") {
  for (Family f : {Family::LERGM, Family::DifferentialStability, Family::ConstDissCSTERGM}) {
    SimConfig c = base(triangle_model(f), 3, false);
    c.max_events = 20000;
    c.track_states = true;
    c.seed = 17;
    const Trajectory t = simulate(c);
    std::vector<double> scaled;
    for (const auto& d : t.dwells) scaled.push_back(d.dwell * d.exit_rate);
    CHECK(ks_unit_exponential(scaled).p_value > 1e-3);
    // the most visited state alone
    const auto busiest = std::max_element(t.states.begin(), t.states.end(), [](const auto& a, const auto& b) {
      return a.second.dwell_count < b.second.dwell_count;
    });
    std::vector<double> own;
    for (const auto& d : t.dwells)
      if (d.exit_rate == busiest->second.exit_rate) own.push_back(d.dwell * d.exit_rate);
    CHECK(own.size() >= busiest->second.dwell_count);
    CHECK(ks_unit_exponential(own).p_value > 1e-3);
  }
}

TEST_CASE("state occupancy converges to the exact equilibrium") {
  for (Family f : kAllFamilies) {
    const bool directed = f == Family::CompetingRateSAOM;
    SimConfig c = base(triangle_model(f), 3, directed);
    c.max_events = directed ? 1500000 : 400000;
    c.track_states = true;
    c.record = RecordMode::TimeAverages;
    c.seed = 23;
    const Trajectory t = simulate(c);
    const StateSpace space(3, directed);
    const auto pi = solve_stationary(build_rate_matrix(c.process, space));
    double total = 0.0;
    for (const auto& [_, r] : t.states) total += r.occupancy;
    std::vector<double> occ(space.size(), 0.0);
    for (const auto& [key, r] : t.states) occ[key] = r.occupancy / total;
    INFO(family_key(f));
    CHECK(total_variation(occ, pi) <= 0.02);
  }
}

TEST_CASE("constant dissolution: edge lifetimes have mean exp(-theta_d)") {
  ProcessSpec s = edges_only(Family::ConstDissCSTERGM, 0.0);
  s.theta_d = std::log(2.0);
  SimConfig c = base(s, 4, false);
  c.max_events = 60000;
  c.seed = 31;
  const auto life = edge_lifetimes(simulate(c));
  REQUIRE(life.size() >= 10000);
  CHECK(std::abs(mean(life) - 0.5) < 0.025);
}

TEST_CASE("time-averaged density of a flat constant-dissolution model") {
  ProcessSpec s = edges_only(Family::ConstDissCSTERGM, 0.0);
  SimConfig c = base(s, 4, false);
  c.t_max = 4000.0;
  c.burn_in = 10.0;
  c.record = RecordMode::TimeAverages;
  c.seed = 3;
  const Trajectory t = simulate(c);
  const double density = t.time_averaged_stats[0] / 6.0;
  const double se = t.standard_errors()[0] / 6.0;
  CHECK(se > 0.0);
  CHECK(std::abs(density - 0.5) < 3 * se + 1e-12);
}

TEST_CASE("ensembles are reproducible and order independent") {
  SimConfig c = base(triangle_model(Family::LERGM), 5, false);
  c.t_max = 20.0;
  c.seed = 1234;
  const auto a = ensemble(c, 4);
  const auto b = ensemble(c, 4);
  const auto s = ensemble_serial(c, 4);
  for (std::size_t k = 0; k < 4; ++k) {
    const Trajectory one = replicate(c, k);
    for (const auto* other : {&b[k], &s[k], &one}) {
      REQUIRE(a[k].events.size() == other->events.size());
      bool same = true;
      for (std::size_t e = 0; e < a[k].events.size(); ++e)
        same = same && a[k].events[e].t == other->events[e].t && a[k].events[e].toggle == other->events[e].toggle;
      CHECK(same);
    }
  }
  CHECK(a[0].events.front().t != a[1].events.front().t);
}

TEST_CASE("ensemble grand mean of the flat density") {
  ProcessSpec s = edges_only(Family::ConstDissCSTERGM, 0.0);
  SimConfig c = base(s, 4, false);
  c.t_max = 100.0;
  c.burn_in = 5.0;
  c.record = RecordMode::TimeAverages;
  c.seed = 77;
  const auto runs = ensemble(c, 100);
  std::vector<double> d;
  for (const auto& r : runs) d.push_back(r.time_averaged_stats[0] / 6.0);
  CHECK(std::abs(mean(d) - 0.5) < 3 * std::sqrt(variance(d) / d.size()));
}

TEST_CASE("statistics snapshots track the observables") {
  SimConfig c = base(triangle_model(Family::CTERGM), 5, false);
  c.record = RecordMode::StatisticsOnly;
  c.max_events = 500;
  const Trajectory t = simulate(c);
  REQUIRE(t.snapshots.size() == 500);
  CHECK(t.stat_names == std::vector<std::string>{"edges", "triangles"});
  CHECK(t.snapshots.back().stats[0] == t.final.edge_count());
  CHECK(t.snapshots.back().stats[1] == brute_term(StatisticTerm::triangles(), t.final));
}
