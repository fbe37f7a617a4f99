#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ergmk/graph.hpp"
#include "ergmk/rng.hpp"
#include "ergmk/state_space.hpp"

namespace ergmk {

/// Contact formation process, optionally with reciprocity (CFPR).
struct CfpParams {
  double r_m = 1.0;  // migration, per vertex
  double r_f = 1.0;  // formation, per co-located edge variable
  double r_d = 1.0;  // dissolution, per edge variable
  int M = 1;         // number of foci
  bool reciprocity = false;
};

/// round(c * n^(1 - gamma)), at least 1.
int cfp_focus_count(int n, double c, double gamma);

void validate(const CfpParams& params);

/// Foci are 0-based: entries in [0, M).
struct CfpState {
  Graph graph;
  std::vector<int> foci;

  CfpState(int n, bool directed) : graph(n, directed), foci(static_cast<std::size_t>(n), 0) {}
  CfpState(Graph g, std::vector<int> f) : graph(std::move(g)), foci(std::move(f)) {}

  bool colocated(Toggle t) const { return foci[t.i] == foci[t.j]; }
};

void validate(const CfpState& state, const CfpParams& params);

enum class CfpEventKind { Migrate, Form, Dissolve };

std::string to_string(CfpEventKind k);

struct CfpEvent {
  CfpEventKind kind = CfpEventKind::Migrate;
  int vertex = -1;  // Migrate
  int focus = -1;   // Migrate: destination (may equal the origin)
  Toggle toggle{-1, -1};  // Form / Dissolve
  /// False for a self-migration or a formation (dissolution) on a present
  /// (absent) edge.
  bool changed = false;
};

struct CfpStepResult {
  double dt = 0.0;
  CfpEvent event;
};

/// Sum of every stream's rate: n r_m + m r_f (+ m r_f with reciprocity) + m r_d.
double cfp_stream_rate(const CfpParams& params, int n, bool directed);

/// Advances `state` to its next event (formation candidates failing the
/// co-location or reverse-arc condition are thinned away) and applies it.
CfpStepResult cfp_step(CfpState& state, const CfpParams& params, Rng& rng);

struct CfpConfig {
  CfpParams params;
  CfpState initial{1, false};
  double t_max = std::numeric_limits<double>::infinity();
  std::uint64_t max_events = 0;
  std::uint64_t seed = 0;
  double burn_in = 0.0;
  int batches = 20;
  bool record_events = false;
  /// Occupancy per product-space state (see cfp_state_index).
  bool track_states = false;
};

struct CfpLogEntry {
  double t = 0.0;
  CfpEventKind kind = CfpEventKind::Migrate;
  int i = -1;
  int j = -1;
  bool add = false;
  int focus = -1;
};

struct CfpRun {
  CfpState final{1, false};
  /// State changes only: migrations (including self-moves) and effective
  /// formations and dissolutions.
  std::vector<CfpLogEntry> log;
  std::uint64_t n_events = 0;
  std::uint64_t migrations = 0;
  std::uint64_t self_migrations = 0;
  std::uint64_t formations = 0;
  std::uint64_t dissolutions = 0;
  std::uint64_t noop_formations = 0;
  std::uint64_t noop_dissolutions = 0;
  double sim_time = 0.0;
  bool hit_event_cap = false;

  /// Post-burn-in time averages.
  double density = 0.0;
  double mutual_dyads = 0.0;  // directed only, fraction of dyads
  std::vector<double> density_batches;
  std::vector<double> mutual_batches;
  /// Per edge variable, fraction of the window it was present.
  std::vector<double> edge_occupancy;
  /// focus_occupancy[v][f]: fraction of the window vertex v spent at focus f.
  std::vector<std::vector<double>> focus_occupancy;
  /// Time-averaged Pr(arc | reverse arc present / absent); directed only.
  double p_given_reverse = 0.0;
  double p_given_no_reverse = 0.0;
  std::map<std::uint64_t, double> state_occupancy;

  double density_se() const;
  double mean_degree() const;
};

CfpRun cfp_simulate(const CfpConfig& config);
std::vector<CfpRun> cfp_ensemble(const CfpConfig& config, int replicates);

/// Product-space index: graph state index + 2^m * (foci read base M).
std::uint64_t cfp_state_index(const CfpState& state, int M);
CfpState cfp_state_from_index(std::uint64_t index, int n, bool directed, int M);

/// Generator of the joint (graph, foci) chain. Self-migrations and no-op
/// events are not transitions. Throws CapExceeded above 2^max_dyads states.
RateMatrix cfp_rate_matrix(const CfpParams& params, int n, bool directed,
                           std::size_t max_dyads = kMaxEnumeratedDyads);

/// Fast-mixing per-arc probability and, with reciprocity, the mutual-dyad
/// fraction of the limiting dyad chain.
double cfp_limit_density(const CfpParams& params);
double cfp_limit_mutual_fraction(const CfpParams& params);

struct CfpCheckConfig {
  CfpParams params;
  int n = 10;
  bool directed = false;
  double horizon = 1000.0;
  double burn_in = 0.0;
  std::uint64_t seed = 0;
  int batches = 20;
  /// Required r_m / max(r_f, r_d); 0 disables the precondition.
  double min_ratio = 1e3;
  double z_threshold = 3.0;
  double dispersion_threshold = 3.0;
};

struct CfpFastMixingReport {
  double ratio = 0.0;
  double density = 0.0;
  double density_se = 0.0;
  double predicted_density = 0.0;
  double density_z = 0.0;
  /// Spread of per-edge occupancies over the spread expected from
  /// independent two-state chains at the limiting rates.
  double dispersion = 0.0;
  /// Krivitsky-reference edges parameter: implied logit(p) + ln n against
  /// ln(r_f / (c r_d)) with c = M / n.
  double implied_theta = 0.0;
  double implied_theta_se = 0.0;
  double limit_theta = 0.0;
  /// CFPR only.
  double mutual_fraction = 0.0;
  double mutual_se = 0.0;
  double predicted_mutual_fraction = 0.0;
  double mutual_z = 0.0;
  /// ln(P_mutual P_null / P_asym^2) - ln n against ln(c (1 + 1/M)).
  double implied_theta_m = 0.0;
  double limit_theta_m = 0.0;
  double p_given_reverse = 0.0;
  double p_given_no_reverse = 0.0;
  /// True when any z or the dispersion exceeds its threshold.
  bool departure = false;
};

/// Throws std::invalid_argument when the migration ratio precondition fails.
CfpFastMixingReport cfp_fast_mixing_check(const CfpCheckConfig& config);

struct DegreeScalingRow {
  int n = 0;
  int M = 0;
  double mean_degree = 0.0;
  double se = 0.0;
  double predicted = 0.0;
};

/// Mean degree at each n with M = cfp_focus_count(n, c, gamma).
std::vector<DegreeScalingRow> cfp_degree_scaling(CfpCheckConfig base, double c, double gamma,
                                                 const std::vector<int>& sizes);

}  // namespace ergmk
