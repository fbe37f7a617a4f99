#include <doctest.h>

#include <cmath>

#include "ergmk/errors.hpp"
#include "ergmk/exact.hpp"
#include "ergmk/stats.hpp"
#include "support.hpp"

using namespace ergmk;
using namespace ergmk::testing;

TEST_CASE("state space cap") {
  CHECK(StateSpace(5, true, 20).size() == (std::size_t{1} << 20));
  CHECK_THROWS_AS(StateSpace(6, true), CapExceeded);
  CHECK_THROWS_AS(StateSpace(7, false), CapExceeded);
}

TEST_CASE("two-state chain") {
  // one edge variable, forward rate 3, backward rate 1: pi = (1/4, 3/4)
  const RateMatrix r = RateMatrix::from_rows({{{1u, 3.0}}, {{0u, 1.0}}});
  const auto pi = solve_stationary(r);
  CHECK(pi[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(pi[1] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(stationary_residual(r, pi) < 1e-15);
  CHECK(embedded_chain_check(r) < 1e-14);
}

TEST_CASE("transient distribution of a symmetric two-state chain") {
  // CTERGM, edges only, theta = 0, n = 2: both rates 1, so p_on(t) = (1 - exp(-2t)) / 2
  const ProcessSpec s = edges_only(Family::CTERGM, 0.0);
  const StateSpace space(2, false);
  const RateMatrix r = build_rate_matrix(s, space);
  const auto p = transient_distribution(r, {1.0, 0.0}, 0.5);
  CHECK(p[1] == doctest::Approx((1.0 - std::exp(-1.0)) / 2.0).epsilon(1e-12));
  const auto p0 = transient_distribution(r, {1.0, 0.0}, 0.0);
  CHECK(p0[0] == 1.0);
  // long times reach the stationary law
  const auto inf = transient_distribution(r, {1.0, 0.0}, 40.0);
  CHECK(inf[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("transient distribution against a dense matrix exponential") {
  // a random small generator; compare with a truncated Taylor series of exp(Rt)
  Gen gen(51);
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(4);
  for (std::uint32_t a = 0; a < 4; ++a)
    for (std::uint32_t b = 0; b < 4; ++b)
      if (a != b) rows[a].emplace_back(b, gen.uniform(0.1, 2.0));
  const RateMatrix r = RateMatrix::from_rows(rows);
  const double t = 0.7;
  std::vector<double> term{0.2, 0.3, 0.1, 0.4}, sum = term;
  for (int k = 1; k < 80; ++k) {
    std::vector<double> next(4, 0.0);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) next[b] += term[a] * (a == b ? r.diagonal[a] : r.at(a, b)) * t / k;
    term = next;
    for (std::size_t b = 0; b < 4; ++b) sum[b] += term[b];
  }
  const auto p = transient_distribution(r, {0.2, 0.3, 0.1, 0.4}, t);
  for (std::size_t b = 0; b < 4; ++b) CHECK(p[b] == doctest::Approx(sum[b]).epsilon(1e-11));
}

TEST_CASE("reducible chains are reported") {
  // two disconnected pairs
  const RateMatrix r = RateMatrix::from_rows({{{1u, 1.0}}, {{0u, 1.0}}, {{3u, 1.0}}, {{2u, 1.0}}});
  CHECK(strongly_connected_components(r) == 2);
  CHECK_THROWS_AS(solve_stationary(r), ReducibleChain);
  // a one-way edge: absorbing state
  const RateMatrix s = RateMatrix::from_rows({{{1u, 1.0}}, {}});
  CHECK(strongly_connected_components(s) == 2);
  CHECK_THROWS_AS(solve_stationary(s), ReducibleChain);
}

TEST_CASE("edges-only equilibria are Bernoulli") {
  for (double theta : {-1.2, 0.0, 0.8}) {
    for (bool directed : {false, true}) {
      const StateSpace space(3, directed);
      const auto rep = compare_equilibrium(edges_only(Family::LERGM, theta), space);
      CHECK(rep.tv_distance < 1e-12);
      for (double p : edge_marginals(space, rep.pi_solved)) CHECK(p == doctest::Approx(logistic(theta)).epsilon(1e-12));
      // log Z = m log(1 + e^theta)
      CHECK(rep.log_Z == doctest::Approx(space.dyads() * std::log1p(std::exp(theta))).epsilon(1e-12));
    }
  }
  // Krivitsky reference shifts the logit by -ln n
  ProcessSpec s = edges_only(Family::LERGM, 0.5);
  s.potential->reference = {ReferenceKind::KrivitskySparse, 1.0};
  const StateSpace space(4, false);
  const auto rep = compare_equilibrium(s, space);
  for (double p : edge_marginals(space, rep.pi_solved))
    CHECK(p == doctest::Approx(logistic(0.5 - std::log(4.0))).epsilon(1e-12));
}

TEST_CASE("CTERGM doubles the potential") {
  const StateSpace space(3, false);
  const auto rep = compare_equilibrium(edges_only(Family::CTERGM, 0.3), space);
  for (double p : edge_marginals(space, rep.pi_solved)) CHECK(p == doctest::Approx(logistic(0.6)).epsilon(1e-10));
}

TEST_CASE("theta = 0 gives the uniform law for every family") {
  for (Family f : kAllFamilies) {
    const bool directed = f == Family::CompetingRateSAOM;
    const StateSpace space(3, directed);
    ProcessSpec s = edges_only(f, 0.0);
    const auto rep = compare_equilibrium(s, space);
    CHECK(rep.tv_distance <= 1e-10);
    for (double p : rep.pi_solved) CHECK(p == doctest::Approx(1.0 / space.size()).epsilon(1e-10));
  }
}

TEST_CASE("balance diagnostics") {
  Gen gen(52);
  for (Family f : kAllFamilies) {
    const bool directed = f == Family::CompetingRateSAOM || gen.coin();
    const StateSpace space(3, directed);
    const ProcessSpec s = gen.process(f, 3, directed);
    const RateMatrix r = build_rate_matrix(s, space);
    const auto pi = analytic_equilibrium(s, space);
    CHECK(global_balance_error(r, pi) < 1e-10);
    CHECK(stationary_residual(r, pi) < 1e-10);
    CHECK(embedded_chain_check(r) < 1e-9);
  }
  // a non-stationary vector fails the balance check
  const RateMatrix r = RateMatrix::from_rows({{{1u, 3.0}}, {{0u, 1.0}}});
  CHECK(global_balance_error(r, {0.5, 0.5}) > 0.1);
  CHECK(detailed_balance_error(r, {0.5, 0.5}) > 0.1);
}

TEST_CASE("large spaces take the iterative path") {
  // 2^15 states, above the dense limit
  ProcessSpec s;
  s.family = Family::LERGM;
  s.potential = PotentialSpec({StatisticTerm::edges(), StatisticTerm::triangles()}, {-0.4, 0.2});
  const StateSpace space(6, false);
  REQUIRE(space.size() > kDenseSolveLimit);
  const auto rep = compare_equilibrium(s, space);
  CHECK(rep.tv_distance < 1e-9);
}

TEST_CASE("total variation") {
  CHECK(total_variation({0.5, 0.5}, {1.0, 0.0}) == doctest::Approx(0.5));
  CHECK(total_variation({0.2, 0.8}, {0.2, 0.8}) == 0.0);
  CHECK_THROWS(total_variation({1.0}, {0.5, 0.5}));
}
