#include "ergmk/process.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ergmk/stats.hpp"

namespace ergmk {

namespace {

struct FamilyInfo {
  Family family;
  std::string_view key;
};

constexpr FamilyInfo kFamilyKeys[] = {
    {Family::CompetingRateSAOM, "saom"},     {Family::LERGM, "lergm"},
    {Family::ChangeInhibition, "inhibit"},   {Family::DifferentialStability, "stability"},
    {Family::ConstDissCSTERGM, "cstergm-cd"}, {Family::ConstFormCSTERGM, "cstergm-cf"},
    {Family::GeneralCSTERGM, "cstergm"},     {Family::CTERGM, "ctergm"},
};

[[noreturn]] void mismatch(const ProcessSpec& spec, const std::string& what) {
  throw std::invalid_argument(std::string(family_key(spec.family)) + ": " + what);
}

void require(const ProcessSpec& spec, bool present, const char* field) {
  if (!present) mismatch(spec, std::string("missing ") + field);
}

void forbid(const ProcessSpec& spec, bool present, const char* field) {
  if (present) mismatch(spec, std::string("unexpected ") + field);
}

bool single_potential(Family f) {
  return f == Family::CompetingRateSAOM || f == Family::LERGM || f == Family::ChangeInhibition ||
         f == Family::DifferentialStability || f == Family::CTERGM;
}

bool uses_formation(Family f) {
  return f == Family::ConstDissCSTERGM || f == Family::GeneralCSTERGM;
}

bool uses_dissolution(Family f) {
  return f == Family::ConstFormCSTERGM || f == Family::GeneralCSTERGM;
}

}  // namespace

std::string_view family_key(Family f) {
  for (const auto& info : kFamilyKeys)
    if (info.family == f) return info.key;
  return "unknown";
}

std::optional<Family> family_from_key(std::string_view key) {
  for (const auto& info : kFamilyKeys)
    if (info.key == key) return info.family;
  return std::nullopt;
}

bool ProcessSpec::uses_rate_constant() const {
  return family == Family::LERGM || family == Family::ChangeInhibition ||
         family == Family::DifferentialStability;
}

bool ProcessSpec::needs_source_potential() const {
  return family == Family::CompetingRateSAOM || family == Family::DifferentialStability;
}

void validate(const ProcessSpec& spec) {
  const Family f = spec.family;
  if (single_potential(f)) {
    require(spec, spec.potential.has_value(), "potential");
  } else {
    forbid(spec, spec.potential.has_value(), "potential (separable families use formation/dissolution)");
  }
  if (uses_formation(f)) require(spec, spec.formation.has_value(), "formation potential");
  else forbid(spec, spec.formation.has_value(), "formation potential");
  if (uses_dissolution(f)) require(spec, spec.dissolution.has_value(), "dissolution potential");
  else forbid(spec, spec.dissolution.has_value(), "dissolution potential");
  if (f == Family::ConstDissCSTERGM) require(spec, spec.theta_d.has_value(), "theta_d");
  else forbid(spec, spec.theta_d.has_value(), "theta_d");
  if (f == Family::ConstFormCSTERGM) require(spec, spec.theta_f.has_value(), "theta_f");
  else forbid(spec, spec.theta_f.has_value(), "theta_f");
  if (spec.uses_rate_constant() && !(spec.rate_constant > 0.0 && std::isfinite(spec.rate_constant)))
    mismatch(spec, "rate constant A must be positive and finite");
  if (spec.theta_d && !std::isfinite(*spec.theta_d)) mismatch(spec, "theta_d must be finite");
  if (spec.theta_f && !std::isfinite(*spec.theta_f)) mismatch(spec, "theta_f must be finite");
}

void validate(const ProcessSpec& spec, const Graph& g) {
  validate(spec);
  if (spec.family == Family::CompetingRateSAOM && !g.directed())
    mismatch(spec, "competing-rate SAOM requires a directed graph");
  if (spec.potential) check_compatible(*spec.potential, g);
  if (spec.formation) check_compatible(*spec.formation, g);
  if (spec.dissolution) check_compatible(*spec.dissolution, g);
}

double rate_from_inputs(const ProcessSpec& spec, const RateInputs& in) {
  const bool add = in.cls == NeighborClass::HPlus;
  switch (spec.family) {
    case Family::CompetingRateSAOM: return std::exp(in.source + in.delta);
    case Family::LERGM: return spec.rate_constant * logistic(in.delta);
    case Family::ChangeInhibition:
      return spec.rate_constant * (in.delta >= 0.0 ? 1.0 : std::exp(in.delta));
    case Family::DifferentialStability:
      return spec.rate_constant / static_cast<double>(in.neighbors) * std::exp(-in.source);
    case Family::ConstDissCSTERGM: return add ? std::exp(in.delta_f) : std::exp(*spec.theta_d);
    case Family::ConstFormCSTERGM: return add ? std::exp(*spec.theta_f) : std::exp(in.delta_d);
    case Family::GeneralCSTERGM: return add ? std::exp(in.delta_f) : std::exp(in.delta_d);
    case Family::CTERGM: return std::exp(in.delta);
  }
  return 0.0;
}

double source_potential(const ProcessSpec& spec, const Graph& g) {
  return spec.needs_source_potential() ? potential(*spec.potential, g) : 0.0;
}

void fill_deltas(const ProcessSpec& spec, const Graph& g, Toggle t, RateInputs& in) {
  in.cls = g.has(g.index_of(t)) ? NeighborClass::HMinus : NeighborClass::HPlus;
  in.neighbors = g.num_dyads();
  if (spec.potential) in.delta = change_score_unchecked(*spec.potential, g, t);
  if (spec.formation) in.delta_f = change_score_unchecked(*spec.formation, g, t);
  if (spec.dissolution) in.delta_d = change_score_unchecked(*spec.dissolution, g, t);
}

Reach process_reach(const ProcessSpec& spec) {
  Reach r = Reach::None;
  auto widen = [&r](const std::optional<PotentialSpec>& p) {
    if (p && static_cast<int>(potential_reach(*p)) > static_cast<int>(r)) r = potential_reach(*p);
  };
  widen(spec.potential);
  widen(spec.formation);
  widen(spec.dissolution);
  return r;
}

double rate(const ProcessSpec& spec, const Graph& g, Toggle t) {
  validate(spec, g);
  g.check_toggle(t);
  RateInputs in;
  in.source = source_potential(spec, g);
  fill_deltas(spec, g, t, in);
  return rate_from_inputs(spec, in);
}

double exit_rate(const ProcessSpec& spec, const Graph& g) {
  validate(spec, g);
  RateInputs in;
  in.source = source_potential(spec, g);
  double total = 0.0;
  for (const auto& t : toggle_table(g.n(), g.directed())) {
    fill_deltas(spec, g, t, in);
    total += rate_from_inputs(spec, in);
  }
  return total;
}

double equilibrium_log_weight(const ProcessSpec& spec, const Graph& g) {
  validate(spec, g);
  switch (spec.family) {
    case Family::CompetingRateSAOM:
    case Family::LERGM:
    case Family::ChangeInhibition:
    case Family::DifferentialStability: return potential(*spec.potential, g);
    case Family::ConstDissCSTERGM:
      return potential(*spec.formation, g) - *spec.theta_d * g.edge_count();
    case Family::ConstFormCSTERGM:
      return potential(*spec.dissolution, g) + *spec.theta_f * g.edge_count();
    case Family::GeneralCSTERGM:
      return potential(*spec.formation, g) + potential(*spec.dissolution, g);
    case Family::CTERGM: return 2.0 * potential(*spec.potential, g);
  }
  return 0.0;
}

double equilibrium_log_weight_change(const ProcessSpec& spec, const Graph& g, Toggle t) {
  const double de = g.has(g.index_of(t)) ? -1.0 : 1.0;
  switch (spec.family) {
    case Family::CompetingRateSAOM:
    case Family::LERGM:
    case Family::ChangeInhibition:
    case Family::DifferentialStability: return change_score_unchecked(*spec.potential, g, t);
    case Family::ConstDissCSTERGM:
      return change_score_unchecked(*spec.formation, g, t) - *spec.theta_d * de;
    case Family::ConstFormCSTERGM:
      return change_score_unchecked(*spec.dissolution, g, t) + *spec.theta_f * de;
    case Family::GeneralCSTERGM:
      return change_score_unchecked(*spec.formation, g, t) +
             change_score_unchecked(*spec.dissolution, g, t);
    case Family::CTERGM: return 2.0 * change_score_unchecked(*spec.potential, g, t);
  }
  return 0.0;
}

double saom_actor_hazard(const ProcessSpec& spec, const Graph& g, int i) {
  if (spec.family != Family::CompetingRateSAOM)
    throw std::invalid_argument("actor hazard is defined for the competing-rate SAOM only");
  validate(spec, g);
  if (i < 0 || i >= g.n()) throw std::out_of_range("actor index out of range");
  const double q = potential(*spec.potential, g);
  double lambda = 0.0;
  for (int j = 0; j < g.n(); ++j)
    if (j != i) lambda += std::exp(q + change_score_unchecked(*spec.potential, g, {i, j}));
  return lambda;
}

std::vector<double> saom_choice_probabilities(const ProcessSpec& spec, const Graph& g, int i) {
  const double lambda = saom_actor_hazard(spec, g, i);
  const double q = potential(*spec.potential, g);
  std::vector<double> p(static_cast<std::size_t>(g.n()), 0.0);
  for (int j = 0; j < g.n(); ++j)
    if (j != i) p[j] = std::exp(q + change_score_unchecked(*spec.potential, g, {i, j})) / lambda;
  return p;
}

std::vector<StatisticTerm> default_observables(const ProcessSpec& spec) {
  std::vector<StatisticTerm> out{StatisticTerm::edges()};
  auto add = [&out](const std::optional<PotentialSpec>& p) {
    if (!p) return;
    for (const auto& t : p->terms) {
      const bool seen = std::any_of(out.begin(), out.end(), [&t](const StatisticTerm& o) {
        return o.kind == t.kind && o.covariate == t.covariate;
      });
      if (!seen) out.push_back(t);
    }
  };
  add(spec.potential);
  add(spec.formation);
  add(spec.dissolution);
  return out;
}

}  // namespace ergmk
