#pragma once

#include <ostream>
#include <string>

#include "ergmk/cfp.hpp"
#include "ergmk/config.hpp"
#include "ergmk/exact.hpp"
#include "ergmk/sampler.hpp"
#include "ergmk/sim.hpp"

namespace ergmk {

/// Shortest round-trip decimal form of x.
std::string format_double(double x);

/// One {"t","i","j","add"} record per line.
void write_events_jsonl(std::ostream& out, const std::vector<Event>& events);
/// As above plus "kind" and, for migrations, "focus" (no "j"/"add").
void write_cfp_log_jsonl(std::ostream& out, const std::vector<CfpLogEntry>& log);
/// Columns t, <stat>...
void write_snapshots_csv(std::ostream& out, const Trajectory& traj);
/// One header row and one value row: time_avg_<stat>..., se_<stat>..., events,
/// sim_time, mean_exit_rate, events_per_unit_time, status.
void write_summary_csv(std::ostream& out, const Trajectory& traj);
/// Columns <stat>...
void write_samples_csv(std::ostream& out, const SampleSet& samples);

/// The model's parameters as they appear in the manifest.
Json theta_json(const ProcessSpec& spec);

Json verify_report_json(const ProcessSpec& spec, const StateSpace& space, const StationaryReport& rep,
                        double embedded_error);
Json crosscheck_report_json(const CrosscheckReport& rep, const Trajectory& traj);

}  // namespace ergmk
