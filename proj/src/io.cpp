#include "ergmk/io.hpp"

#include <charconv>
#include <cmath>

namespace ergmk {

std::string format_double(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

namespace {

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << cells[k];
  out << '\n';
}

Json potential_json(const PotentialSpec& p) {
  Json j;
  Json terms = Json::array();
  for (const auto& t : p.terms) terms.push_back(t.name());
  j["terms"] = terms;
  j["theta"] = p.theta;
  j["reference"] = p.reference.kind == ReferenceKind::PowerLaw
                       ? "powerlaw:" + format_double(p.reference.gamma)
                       : p.reference.name();
  return j;
}

// JSON has no infinities; they become null.
Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

void write_events_jsonl(std::ostream& out, const std::vector<Event>& events) {
  for (const auto& e : events) {
    Json j;
    j["t"] = e.t;
    j["i"] = e.toggle.i;
    j["j"] = e.toggle.j;
    j["add"] = e.add;
    out << j.dump() << '\n';
  }
}

void write_cfp_log_jsonl(std::ostream& out, const std::vector<CfpLogEntry>& log) {
  for (const auto& e : log) {
    Json j;
    j["t"] = e.t;
    j["i"] = e.i;
    if (e.kind == CfpEventKind::Migrate) {
      j["kind"] = to_string(e.kind);
      j["focus"] = e.focus;
    } else {
      j["j"] = e.j;
      j["add"] = e.add;
      j["kind"] = to_string(e.kind);
    }
    out << j.dump() << '\n';
  }
}

void write_snapshots_csv(std::ostream& out, const Trajectory& traj) {
  std::vector<std::string> head{"t"};
  head.insert(head.end(), traj.stat_names.begin(), traj.stat_names.end());
  write_row(out, head);
  for (const auto& s : traj.snapshots) {
    std::vector<std::string> row{format_double(s.t)};
    for (double x : s.stats) row.push_back(format_double(x));
    write_row(out, row);
  }
}

void write_summary_csv(std::ostream& out, const Trajectory& traj) {
  std::vector<std::string> head, row;
  const auto se = traj.standard_errors();
  for (std::size_t s = 0; s < traj.stat_names.size(); ++s) {
    head.push_back("time_avg_" + traj.stat_names[s]);
    row.push_back(format_double(traj.time_averaged_stats[s]));
  }
  for (std::size_t s = 0; s < traj.stat_names.size(); ++s) {
    head.push_back("se_" + traj.stat_names[s]);
    row.push_back(s < se.size() ? format_double(se[s]) : "");
  }
  head.insert(head.end(), {"events", "sim_time", "mean_exit_rate", "events_per_unit_time", "status"});
  row.insert(row.end(), {std::to_string(traj.n_events), format_double(traj.sim_time),
                         format_double(traj.mean_exit_rate), format_double(traj.events_per_unit_time()),
                         to_string(traj.status)});
  write_row(out, head);
  write_row(out, row);
}

void write_samples_csv(std::ostream& out, const SampleSet& samples) {
  write_row(out, samples.stat_names);
  for (const auto& r : samples.rows) {
    std::vector<std::string> row;
    for (double x : r) row.push_back(format_double(x));
    write_row(out, row);
  }
}

Json theta_json(const ProcessSpec& spec) {
  Json j;
  if (spec.potential) j = potential_json(*spec.potential);
  if (spec.formation) j["formation"] = potential_json(*spec.formation);
  if (spec.dissolution) j["dissolution"] = potential_json(*spec.dissolution);
  if (spec.theta_d) j["theta_d"] = *spec.theta_d;
  if (spec.theta_f) j["theta_f"] = *spec.theta_f;
  if (spec.uses_rate_constant()) j["A"] = spec.rate_constant;
  return j;
}

Json verify_report_json(const ProcessSpec& spec, const StateSpace& space, const StationaryReport& rep,
                        double embedded_error) {
  Json j;
  j["family"] = std::string(family_key(spec.family));
  j["n"] = space.n();
  j["directed"] = space.directed();
  j["theta"] = theta_json(spec);
  j["tv_distance"] = rep.tv_distance;
  j["max_rel_error"] = rep.max_rel_error;
  j["residual"] = rep.residual;
  j["states"] = rep.states;
  j["embedded_error"] = embedded_error;
  j["log_Z"] = rep.log_Z;
  j["edge_marginals"] = edge_marginals(space, rep.pi_solved);
  return j;
}

Json crosscheck_report_json(const CrosscheckReport& rep, const Trajectory& traj) {
  Json j;
  Json stats = Json::array();
  for (const auto& s : rep.stats) {
    Json r;
    r["name"] = s.name;
    r["sim_mean"] = s.sim_mean;
    r["sim_se"] = s.sim_se;
    r["mcmc_mean"] = s.mcmc_mean;
    r["mcmc_se"] = s.mcmc_se;
    r["z"] = num(s.z);
    r["flagged"] = s.flagged;
    stats.push_back(r);
  }
  j["statistics"] = stats;
  Json d;
  d["stays"] = traj.stays;
  if (traj.stays > 0) {
    const double k = static_cast<double>(traj.stays);
    d["mean_dwell"] = traj.dwell_sum / k;
    d["mean_expected_dwell"] = traj.expected_dwell_sum / k;
    const double spread = std::sqrt(traj.dwell_residual_sq);
    d["z"] = num(spread > 0.0 ? (traj.dwell_sum - traj.expected_dwell_sum) / spread : 0.0);
  }
  d["events_per_unit_time"] = traj.events_per_unit_time();
  d["mean_inter_event_time"] = traj.n_events > 0 ? num(traj.sim_time / static_cast<double>(traj.n_events)) : Json();
  j["dwell"] = d;
  j["passed"] = rep.passed;
  return j;
}

}  // namespace ergmk
