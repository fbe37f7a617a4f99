#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ergmk/graph.hpp"

namespace ergmk {

/// Dense n x n pairwise covariate, row-major.
struct Covariate {
  int n = 0;
  std::vector<double> values;

  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * n + j]; }
};

enum class TermKind { Edges, Mutuals, Triangles, TwoStars, EdgeCovariate };

/// One sufficient statistic.
///
/// Triangles counts closed triangles on undirected graphs and transitive
/// triples (i->j, j->k, i->k) on directed graphs. TwoStars counts
/// sum_i C(d_i, 2) on undirected graphs and out-two-stars on directed graphs.
struct StatisticTerm {
  TermKind kind = TermKind::Edges;
  std::shared_ptr<const Covariate> covariate;

  static StatisticTerm edges() { return {TermKind::Edges, nullptr}; }
  static StatisticTerm mutuals() { return {TermKind::Mutuals, nullptr}; }
  static StatisticTerm triangles() { return {TermKind::Triangles, nullptr}; }
  static StatisticTerm two_stars() { return {TermKind::TwoStars, nullptr}; }
  static StatisticTerm edge_covariate(Covariate x);

  std::string name() const;
};

enum class ReferenceKind { Counting, KrivitskySparse, ReciprocitySparse, PowerLaw };

struct ReferenceMeasure {
  ReferenceKind kind = ReferenceKind::Counting;
  double gamma = 1.0;  // PowerLaw only

  std::string name() const;
};

/// q(g) = theta . w(g, X) + ln h(g).
struct PotentialSpec {
  std::vector<StatisticTerm> terms;
  std::vector<double> theta;
  ReferenceMeasure reference;

  PotentialSpec() = default;
  PotentialSpec(std::vector<StatisticTerm> terms, std::vector<double> theta,
                ReferenceMeasure reference = {});
};

/// Which other toggles can see their change score altered after a toggle.
enum class Reach { None, Reverse, Incident };

void check_compatible(const StatisticTerm& term, const Graph& g);
void check_compatible(const ReferenceMeasure& ref, const Graph& g);
void check_compatible(const PotentialSpec& spec, const Graph& g);

double term_value(const StatisticTerm& term, const Graph& g);
/// w(g^c_t) - w(g), computed locally.
double term_change(const StatisticTerm& term, const Graph& g, Toggle t);
Reach term_reach(const StatisticTerm& term);

double log_reference(const ReferenceMeasure& ref, const Graph& g);
double log_reference_change(const ReferenceMeasure& ref, const Graph& g, Toggle t);
Reach reference_reach(const ReferenceMeasure& ref);

std::vector<double> statistics(const PotentialSpec& spec, const Graph& g);
std::vector<double> statistics(const std::vector<StatisticTerm>& terms, const Graph& g);
double potential(const PotentialSpec& spec, const Graph& g);
double change_score(const PotentialSpec& spec, const Graph& g, Toggle t);
Reach potential_reach(const PotentialSpec& spec);

/// Same as change_score but without compatibility checks; for inner loops.
double change_score_unchecked(const PotentialSpec& spec, const Graph& g, Toggle t);

}  // namespace ergmk
