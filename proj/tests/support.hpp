#pragma once

// Random generators and brute-force oracles shared by the test binaries.

#include <cmath>
#include <vector>

#include "ergmk/graph.hpp"
#include "ergmk/potential.hpp"
#include "ergmk/process.hpp"
#include "ergmk/rng.hpp"

namespace ergmk::testing {

using Matrix = std::vector<std::vector<int>>;

inline Matrix adjacency(const Graph& g) {
  const int n = g.n();
  Matrix a(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) a[i][j] = g.has_edge(i, j) ? 1 : 0;
  return a;
}

/// Statistics straight from the adjacency matrix, by enumeration.
inline double brute_term(const StatisticTerm& term, const Graph& g) {
  const Matrix a = adjacency(g);
  const int n = g.n();
  const bool d = g.directed();
  double s = 0.0;
  switch (term.kind) {
    case TermKind::Edges:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j && (d || i < j)) s += a[i][j];
      return s;
    case TermKind::Mutuals:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) s += a[i][j] * a[j][i];
      return s;
    case TermKind::Triangles:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            if (i == j || j == k || i == k) continue;
            if (d) s += a[i][j] * a[j][k] * a[i][k];
            else if (i < j && j < k) s += a[i][j] * a[j][k] * a[i][k];
          }
      return s;
    case TermKind::TwoStars:
      for (int i = 0; i < n; ++i) {
        int deg = 0;
        for (int j = 0; j < n; ++j) deg += a[i][j];
        s += deg * (deg - 1) / 2.0;
      }
      return s;
    case TermKind::EdgeCovariate:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j && (d || i < j) && a[i][j]) s += term.covariate->at(i, j);
      return s;
  }
  return s;
}

inline double brute_log_reference(const ReferenceMeasure& ref, const Graph& g) {
  const double ln_n = std::log(static_cast<double>(g.n()));
  const double e = brute_term(StatisticTerm::edges(), g);
  switch (ref.kind) {
    case ReferenceKind::Counting: return 0.0;
    case ReferenceKind::KrivitskySparse: return -e * ln_n;
    case ReferenceKind::ReciprocitySparse: return (brute_term(StatisticTerm::mutuals(), g) - e) * ln_n;
    case ReferenceKind::PowerLaw:
      return (1.0 - ref.gamma) * (brute_term(StatisticTerm::mutuals(), g) - e) * ln_n;
  }
  return 0.0;
}

inline double brute_potential(const PotentialSpec& p, const Graph& g) {
  double q = brute_log_reference(p.reference, g);
  for (std::size_t k = 0; k < p.terms.size(); ++k) q += p.theta[k] * brute_term(p.terms[k], g);
  return q;
}

/// Hand-rolled generator for property tests.
struct Gen {
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))); }
  bool coin(double p = 0.5) { return rng.uniform() < p; }

  Graph graph(int n, bool directed, double p = 0.5) {
    Graph g(n, directed);
    for (std::size_t k = 0; k < g.num_dyads(); ++k)
      if (coin(p)) g.flip(k);
    return g;
  }

  Toggle toggle(int n) {
    const int i = integer(0, n - 1);
    int j = integer(0, n - 2);
    if (j >= i) ++j;
    return {i, j};
  }

  Covariate covariate(int n) {
    Covariate x;
    x.n = n;
    for (int k = 0; k < n * n; ++k) x.values.push_back(uniform(-1.0, 1.0));
    return x;
  }

  /// Any subset of the terms valid on the support, random theta, and (when
  /// `any_reference`) a random compatible reference measure.
  PotentialSpec potential(int n, bool directed, double scale = 1.5, bool any_reference = true) {
    std::vector<StatisticTerm> terms{StatisticTerm::edges()};
    if (directed && coin()) terms.push_back(StatisticTerm::mutuals());
    if (coin()) terms.push_back(StatisticTerm::triangles());
    if (coin()) terms.push_back(StatisticTerm::two_stars());
    if (coin(0.3)) terms.push_back(StatisticTerm::edge_covariate(covariate(n)));
    std::vector<double> theta;
    for (std::size_t k = 0; k < terms.size(); ++k) theta.push_back(uniform(-scale, scale));
    ReferenceMeasure ref;
    if (any_reference) {
      const int pick = integer(0, directed ? 3 : 1);
      ref.kind = static_cast<ReferenceKind>(pick);
      if (ref.kind == ReferenceKind::PowerLaw) ref.gamma = uniform(0.0, 1.0);
    }
    return PotentialSpec(std::move(terms), std::move(theta), ref);
  }

  ProcessSpec process(Family f, int n, bool directed, double scale = 1.5) {
    ProcessSpec p;
    p.family = f;
    const double a_choices[] = {0.5, 1.0, 2.0};
    switch (f) {
      case Family::CompetingRateSAOM:
      case Family::CTERGM: p.potential = potential(n, directed, scale); break;
      case Family::LERGM:
      case Family::ChangeInhibition:
      case Family::DifferentialStability:
        p.potential = potential(n, directed, scale);
        p.rate_constant = a_choices[integer(0, 2)];
        break;
      case Family::ConstDissCSTERGM:
        p.formation = potential(n, directed, scale);
        p.theta_d = uniform(-1.0, 1.0);
        break;
      case Family::ConstFormCSTERGM:
        p.dissolution = potential(n, directed, scale);
        p.theta_f = uniform(-1.0, 1.0);
        break;
      case Family::GeneralCSTERGM:
        p.formation = potential(n, directed, scale);
        p.dissolution = potential(n, directed, scale);
        break;
    }
    return p;
  }

  Rng rng;
};

inline ProcessSpec edges_only(Family f, double theta, double a = 1.0) {
  ProcessSpec p;
  p.family = f;
  PotentialSpec q({StatisticTerm::edges()}, {theta});
  switch (f) {
    case Family::ConstDissCSTERGM: p.formation = q; p.theta_d = 0.0; break;
    case Family::ConstFormCSTERGM: p.dissolution = q; p.theta_f = 0.0; break;
    case Family::GeneralCSTERGM: p.formation = q; p.dissolution = q; break;
    default: p.potential = q; p.rate_constant = a; break;
  }
  return p;
}

}  // namespace ergmk::testing
