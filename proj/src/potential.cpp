#include "ergmk/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ergmk {

namespace {

bool edge(const Graph& g, int i, int j) { return g.has(g.index_of({i, j})); }

double mutual_change(const Graph& g, Toggle t) {
  if (!edge(g, t.j, t.i)) return 0.0;
  return edge(g, t.i, t.j) ? -1.0 : 1.0;
}

// Number of triangles / transitive triples the variable t closes, ignoring
// its own state.
double triangle_partners(const Graph& g, Toggle t) {
  const int a = t.i, b = t.j;
  int c = 0;
  if (!g.directed()) {
    for (int k = 0; k < g.n(); ++k)
      if (k != a && k != b && edge(g, a, k) && edge(g, b, k)) ++c;
    return c;
  }
  for (int k = 0; k < g.n(); ++k) {
    if (k == a || k == b) continue;
    if (edge(g, b, k) && edge(g, a, k)) ++c;  // a->b, b->k, a->k
    if (edge(g, k, a) && edge(g, k, b)) ++c;  // k->a, a->b, k->b
    if (edge(g, a, k) && edge(g, k, b)) ++c;  // a->k, k->b, a->b
  }
  return c;
}

double star_partners(const Graph& g, Toggle t) {
  const int own = edge(g, t.i, t.j) ? 1 : 0;
  if (g.directed()) return g.out_degree(t.i) - own;
  return (g.degree(t.i) - own) + (g.degree(t.j) - own);
}

Reach widest(Reach a, Reach b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

}  // namespace

StatisticTerm StatisticTerm::edge_covariate(Covariate x) {
  if (x.n < 1 || x.values.size() != static_cast<std::size_t>(x.n) * x.n)
    throw std::invalid_argument("covariate must be an n x n matrix");
  return {TermKind::EdgeCovariate, std::make_shared<const Covariate>(std::move(x))};
}

std::string StatisticTerm::name() const {
  switch (kind) {
    case TermKind::Edges: return "edges";
    case TermKind::Mutuals: return "mutuals";
    case TermKind::Triangles: return "triangles";
    case TermKind::TwoStars: return "twostars";
    case TermKind::EdgeCovariate: return "edgecov";
  }
  return "unknown";
}

std::string ReferenceMeasure::name() const {
  switch (kind) {
    case ReferenceKind::Counting: return "counting";
    case ReferenceKind::KrivitskySparse: return "krivitsky";
    case ReferenceKind::ReciprocitySparse: return "reciprocity";
    case ReferenceKind::PowerLaw: return "powerlaw";
  }
  return "unknown";
}

PotentialSpec::PotentialSpec(std::vector<StatisticTerm> terms, std::vector<double> theta,
                             ReferenceMeasure reference)
    : terms(std::move(terms)), theta(std::move(theta)), reference(reference) {
  if (this->terms.size() != this->theta.size())
    throw std::invalid_argument("theta length must match the number of terms");
  for (double v : this->theta)
    if (!std::isfinite(v)) throw std::invalid_argument("theta must be finite");
  if (reference.kind == ReferenceKind::PowerLaw && !std::isfinite(reference.gamma))
    throw std::invalid_argument("power-law gamma must be finite");
}

void check_compatible(const StatisticTerm& term, const Graph& g) {
  if (term.kind == TermKind::Mutuals && !g.directed())
    throw std::invalid_argument("mutuals term requires a directed graph");
  if (term.kind == TermKind::EdgeCovariate) {
    if (!term.covariate) throw std::invalid_argument("edgecov term has no covariate");
    if (term.covariate->n != g.n())
      throw std::invalid_argument("covariate dimension does not match graph order");
  }
}

void check_compatible(const ReferenceMeasure& ref, const Graph& g) {
  if ((ref.kind == ReferenceKind::ReciprocitySparse || ref.kind == ReferenceKind::PowerLaw) &&
      !g.directed())
    throw std::invalid_argument(ref.name() + " reference requires a directed graph");
}

void check_compatible(const PotentialSpec& spec, const Graph& g) {
  if (spec.terms.size() != spec.theta.size())
    throw std::invalid_argument("theta length must match the number of terms");
  for (const auto& t : spec.terms) check_compatible(t, g);
  check_compatible(spec.reference, g);
}

double term_value(const StatisticTerm& term, const Graph& g) {
  check_compatible(term, g);
  const int n = g.n();
  switch (term.kind) {
    case TermKind::Edges: return g.edge_count();
    case TermKind::Mutuals: return mutual_count(g);
    case TermKind::Triangles: {
      double c = 0;
      if (!g.directed()) {
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            if (edge(g, i, j))
              for (int k = j + 1; k < n; ++k)
                if (edge(g, i, k) && edge(g, j, k)) ++c;
        return c;
      }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (j != i && edge(g, i, j))
            for (int k = 0; k < n; ++k)
              if (k != i && k != j && edge(g, j, k) && edge(g, i, k)) ++c;
      return c;
    }
    case TermKind::TwoStars: {
      double c = 0;
      for (int i = 0; i < n; ++i) {
        const double d = g.out_degree(i);
        c += d * (d - 1) / 2;
      }
      return c;
    }
    case TermKind::EdgeCovariate: {
      double s = 0;
      for (std::size_t k = 0; k < g.num_dyads(); ++k)
        if (g.has(k)) {
          const auto t = g.toggle_at(k);
          s += term.covariate->at(t.i, t.j);
        }
      return s;
    }
  }
  return 0;
}

double term_change(const StatisticTerm& term, const Graph& g, Toggle t) {
  const double sign = edge(g, t.i, t.j) ? -1.0 : 1.0;
  switch (term.kind) {
    case TermKind::Edges: return sign;
    case TermKind::Mutuals: return mutual_change(g, t);
    case TermKind::Triangles: return sign * triangle_partners(g, t);
    case TermKind::TwoStars: return sign * star_partners(g, t);
    case TermKind::EdgeCovariate: {
      const int i = g.directed() ? t.i : std::min(t.i, t.j);
      const int j = g.directed() ? t.j : std::max(t.i, t.j);
      return sign * term.covariate->at(i, j);
    }
  }
  return 0;
}

Reach term_reach(const StatisticTerm& term) {
  switch (term.kind) {
    case TermKind::Edges:
    case TermKind::EdgeCovariate: return Reach::None;
    case TermKind::Mutuals: return Reach::Reverse;
    case TermKind::Triangles:
    case TermKind::TwoStars: return Reach::Incident;
  }
  return Reach::Incident;
}

double log_reference(const ReferenceMeasure& ref, const Graph& g) {
  check_compatible(ref, g);
  const double ln_n = std::log(static_cast<double>(g.n()));
  switch (ref.kind) {
    case ReferenceKind::Counting: return 0.0;
    case ReferenceKind::KrivitskySparse: return -g.edge_count() * ln_n;
    case ReferenceKind::ReciprocitySparse: return (mutual_count(g) - g.edge_count()) * ln_n;
    case ReferenceKind::PowerLaw:
      return (1.0 - ref.gamma) * (mutual_count(g) - g.edge_count()) * ln_n;
  }
  return 0.0;
}

double log_reference_change(const ReferenceMeasure& ref, const Graph& g, Toggle t) {
  const double ln_n = std::log(static_cast<double>(g.n()));
  const double de = edge(g, t.i, t.j) ? -1.0 : 1.0;
  switch (ref.kind) {
    case ReferenceKind::Counting: return 0.0;
    case ReferenceKind::KrivitskySparse: return -de * ln_n;
    case ReferenceKind::ReciprocitySparse: return (mutual_change(g, t) - de) * ln_n;
    case ReferenceKind::PowerLaw: return (1.0 - ref.gamma) * (mutual_change(g, t) - de) * ln_n;
  }
  return 0.0;
}

Reach reference_reach(const ReferenceMeasure& ref) {
  switch (ref.kind) {
    case ReferenceKind::Counting:
    case ReferenceKind::KrivitskySparse: return Reach::None;
    case ReferenceKind::ReciprocitySparse:
    case ReferenceKind::PowerLaw: return Reach::Reverse;
  }
  return Reach::Reverse;
}

std::vector<double> statistics(const std::vector<StatisticTerm>& terms, const Graph& g) {
  std::vector<double> w;
  w.reserve(terms.size());
  for (const auto& t : terms) w.push_back(term_value(t, g));
  return w;
}

std::vector<double> statistics(const PotentialSpec& spec, const Graph& g) {
  check_compatible(spec, g);
  return statistics(spec.terms, g);
}

double potential(const PotentialSpec& spec, const Graph& g) {
  check_compatible(spec, g);
  double q = log_reference(spec.reference, g);
  for (std::size_t k = 0; k < spec.terms.size(); ++k)
    if (spec.theta[k] != 0.0) q += spec.theta[k] * term_value(spec.terms[k], g);
  return q;
}

double change_score_unchecked(const PotentialSpec& spec, const Graph& g, Toggle t) {
  double d = log_reference_change(spec.reference, g, t);
  for (std::size_t k = 0; k < spec.terms.size(); ++k)
    if (spec.theta[k] != 0.0) d += spec.theta[k] * term_change(spec.terms[k], g, t);
  return d;
}

double change_score(const PotentialSpec& spec, const Graph& g, Toggle t) {
  check_compatible(spec, g);
  g.check_toggle(t);
  return change_score_unchecked(spec, g, t);
}

Reach potential_reach(const PotentialSpec& spec) {
  Reach r = reference_reach(spec.reference);
  for (const auto& t : spec.terms) r = widest(r, term_reach(t));
  return r;
}

}  // namespace ergmk
