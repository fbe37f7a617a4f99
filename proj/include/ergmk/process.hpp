#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ergmk/graph.hpp"
#include "ergmk/potential.hpp"

namespace ergmk {

enum class Family {
  CompetingRateSAOM,
  LERGM,
  ChangeInhibition,
  DifferentialStability,
  ConstDissCSTERGM,
  ConstFormCSTERGM,
  GeneralCSTERGM,
  CTERGM,
};

inline constexpr Family kAllFamilies[] = {
    Family::CompetingRateSAOM,     Family::LERGM,           Family::ChangeInhibition,
    Family::DifferentialStability, Family::ConstDissCSTERGM, Family::ConstFormCSTERGM,
    Family::GeneralCSTERGM,        Family::CTERGM,
};

/// Config key: "saom", "lergm", "inhibit", "stability", "cstergm-cd", "cstergm-cf",
/// "cstergm", "ctergm".
std::string_view family_key(Family f);
std::optional<Family> family_from_key(std::string_view key);

/// A continuous-time graph process with a known ERGM equilibrium.
///
/// Which fields are required depends on the family:
///   saom, ctergm                 potential
///   lergm, inhibit, stability    potential, rate_constant
///   cstergm-cd                   formation, theta_d
///   cstergm-cf                   dissolution, theta_f
///   cstergm                      formation, dissolution
struct ProcessSpec {
  Family family = Family::LERGM;
  double rate_constant = 1.0;
  std::optional<PotentialSpec> potential;
  std::optional<PotentialSpec> formation;
  std::optional<PotentialSpec> dissolution;
  std::optional<double> theta_d;
  std::optional<double> theta_f;

  bool uses_rate_constant() const;
  bool needs_source_potential() const;
};

/// Throws std::invalid_argument on a family/field mismatch.
void validate(const ProcessSpec& spec);
void validate(const ProcessSpec& spec, const Graph& g);

/// Everything a rate needs about one toggle from one state. `delta` is the
/// change in q, `delta_f`/`delta_d` the changes in q_f/q_d; `source` is q(a)
/// for families driven by absolute potentials.
struct RateInputs {
  NeighborClass cls = NeighborClass::HPlus;
  double delta = 0.0;
  double delta_f = 0.0;
  double delta_d = 0.0;
  double source = 0.0;
  std::size_t neighbors = 1;
};

double rate_from_inputs(const ProcessSpec& spec, const RateInputs& in);

/// q(a) when the family needs it (SAOM, differential stability), else 0.
double source_potential(const ProcessSpec& spec, const Graph& g);

/// Fills the change-score fields of `in` for toggle t at g (no validation).
void fill_deltas(const ProcessSpec& spec, const Graph& g, Toggle t, RateInputs& in);

/// Widest change-score dependency over the potentials the family uses.
Reach process_reach(const ProcessSpec& spec);

/// R_ab for b = g with t toggled.
double rate(const ProcessSpec& spec, const Graph& g, Toggle t);
/// Sum of rate() over every toggle.
double exit_rate(const ProcessSpec& spec, const Graph& g);

/// Unnormalised log stationary weight of g (the Table-1 style equilibrium).
double equilibrium_log_weight(const ProcessSpec& spec, const Graph& g);
/// equilibrium_log_weight(g^c_t) - equilibrium_log_weight(g), computed locally.
double equilibrium_log_weight_change(const ProcessSpec& spec, const Graph& g, Toggle t);

/// lambda_i(g) = sum_{j != i} exp(q(g^c_ij)).
double saom_actor_hazard(const ProcessSpec& spec, const Graph& g, int i);
/// Multinomial-logit target distribution of actor i; entry i is zero.
std::vector<double> saom_choice_probabilities(const ProcessSpec& spec, const Graph& g, int i);

/// Statistic terms reported by simulations of this process: the terms of the
/// potentials the family uses, with an edges term first if none is present.
std::vector<StatisticTerm> default_observables(const ProcessSpec& spec);

}  // namespace ergmk
