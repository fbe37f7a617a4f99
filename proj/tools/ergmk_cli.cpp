// ergmk: simulate, verify and cross-check continuous-time graph processes.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ergmk/cfp.hpp"
#include "ergmk/config.hpp"
#include "ergmk/errors.hpp"
#include "ergmk/exact.hpp"
#include "ergmk/io.hpp"
#include "ergmk/kernels.hpp"
#include "ergmk/sampler.hpp"
#include "ergmk/sim.hpp"

namespace fs = std::filesystem;
using namespace ergmk;

namespace {

enum Exit : int { kOk = 0, kRuntime = 1, kConfig = 2, kVerifyFailed = 3, kCap = 4, kAbsorbing = 5 };

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool quiet = false;
  int threads = 0;
};

void say(const Options& o, const std::string& msg) {
  if (!o.quiet) std::cout << msg << '\n';
}

std::ofstream open_out(const fs::path& dir, const char* name) {
  std::ofstream f(dir / name, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
  return f;
}

RunConfig load(const Options& o) {
  ConfigOverrides over;
  over.seed = o.seed;
  if (o.out) over.output_dir = *o.out;
  RunConfig rc = load_config(o.config, over);
  fs::create_directories(rc.output_dir);
  return rc;
}

void write_manifest(const RunConfig& rc) { open_out(rc.output_dir, "manifest.json") << rc.resolved.dump(2) << '\n'; }

const ProcessSpec& need_model(const RunConfig& rc) {
  if (!rc.process) throw ConfigError("this command needs a 'model' block");
  return *rc.process;
}

SimConfig sim_config(const RunConfig& rc) {
  need_model(rc);
  if (!rc.has_max_events) throw ConfigError("missing required key sim.max_events");
  SimConfig sc = rc.sim;
  try {
    validate(sc);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return sc;
}

void write_trajectory(const RunConfig& rc, const Trajectory& traj) {
  if (rc.sim.record == RecordMode::FullEvents) {
    auto f = open_out(rc.output_dir, "events.jsonl");
    write_events_jsonl(f, traj.events);
  } else if (rc.sim.record == RecordMode::StatisticsOnly) {
    auto f = open_out(rc.output_dir, "statistics.csv");
    write_snapshots_csv(f, traj);
  }
  auto f = open_out(rc.output_dir, "summary.csv");
  write_summary_csv(f, traj);
}

int status_code(const Options& o, const Trajectory& traj) {
  switch (traj.status) {
    case RunStatus::TimeLimit: return kOk;
    case RunStatus::EventCap:
      say(o, "stopped at the event cap (" + std::to_string(traj.n_events) + " events, t = " +
                 format_double(traj.sim_time) + ")");
      return kCap;
    case RunStatus::Absorbing:
      std::cerr << "ergmk: absorbing state reached at t = " << format_double(traj.sim_time) << '\n';
      return kAbsorbing;
  }
  return kRuntime;
}

int cmd_simulate(const Options& o) {
  const RunConfig rc = load(o);
  const SimConfig sc = sim_config(rc);
  const Trajectory traj = simulate(sc);
  write_trajectory(rc, traj);
  write_manifest(rc);
  say(o, std::to_string(traj.n_events) + " events to t = " + format_double(traj.sim_time) + " (" +
             format_double(traj.events_per_unit_time()) + " per unit time); output in " + rc.output_dir.string());
  return status_code(o, traj);
}

int cmd_verify(const Options& o) {
  const RunConfig rc = load(o);
  const ProcessSpec& ps = need_model(rc);
  const StateSpace space(rc.n, rc.directed);
  const StationaryReport rep = compare_equilibrium(ps, space);
  const double embedded = embedded_chain_check(ps, space);
  const Json j = verify_report_json(ps, space, rep, embedded);
  open_out(rc.output_dir, "report.json") << j.dump(2) << '\n';
  write_manifest(rc);
  say(o, j.dump(2));
  const bool ok = rep.tv_distance <= 1e-9 && embedded <= 1e-9;
  if (!ok) std::cerr << "ergmk: verification failed\n";
  return ok ? kOk : kVerifyFailed;
}

int cmd_crosscheck(const Options& o) {
  const RunConfig rc = load(o);
  SimConfig sc = sim_config(rc);
  if (!rc.sampler) throw ConfigError("crosscheck needs a 'sampler' block");
  if (!std::isfinite(sc.t_max)) throw ConfigError("crosscheck needs sim.t_max for batch standard errors");
  if (sc.observables.empty()) sc.observables = default_observables(sc.process);
  const Trajectory traj = simulate(sc);
  write_trajectory(rc, traj);
  if (traj.status != RunStatus::TimeLimit) {
    write_manifest(rc);
    return status_code(o, traj);
  }

  const auto& ss = *rc.sampler;
  SamplerConfig mc(TargetWeight(sc.process));
  mc.n = rc.n;
  mc.directed = rc.directed;
  mc.burn_in_steps = ss.burn_in;
  mc.thin = ss.thin;
  mc.n_samples = ss.samples;
  mc.seed = ss.seed;
  mc.observables = sc.observables;
  mc.initial = sc.initial;
  const SampleSet samples = mcmc_sample(mc);
  {
    auto f = open_out(rc.output_dir, "samples.csv");
    write_samples_csv(f, samples);
  }
  const CrosscheckReport rep = crosscheck(traj, samples, ss.batches, ss.threshold);
  const Json j = crosscheck_report_json(rep, traj);
  open_out(rc.output_dir, "crosscheck.json") << j.dump(2) << '\n';
  write_manifest(rc);
  say(o, j.dump(2));
  if (!rep.passed) std::cerr << "ergmk: cross-check flagged a statistic\n";
  return rep.passed ? kOk : kVerifyFailed;
}

int cmd_cfp(const Options& o) {
  const RunConfig rc = load(o);
  if (!rc.cfp) throw ConfigError("cfp needs a 'cfp' block");
  if (rc.process) throw ConfigError("cfp does not take a 'model' block");
  if (!rc.has_max_events) throw ConfigError("missing required key sim.max_events");
  if (rc.sim.record == RecordMode::StatisticsOnly) throw ConfigError("cfp records events or averages only");
  const CfpParams& p = rc.cfp->params;

  CfpConfig c;
  c.params = p;
  c.initial = CfpState(rc.sim.initial, std::vector<int>(static_cast<std::size_t>(rc.n)));
  Rng init(derive_seed(rc.sim.seed, 0));
  for (auto& f : c.initial.foci) f = static_cast<int>(init.below(static_cast<std::uint64_t>(p.M)));
  c.t_max = rc.sim.t_max;
  c.max_events = rc.sim.max_events;
  c.seed = rc.sim.seed;
  c.burn_in = rc.sim.burn_in;
  c.batches = rc.sim.batches;
  c.record_events = rc.sim.record == RecordMode::FullEvents;
  CfpRun run;
  try {
    run = cfp_simulate(c);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  if (c.record_events) {
    auto f = open_out(rc.output_dir, "events.jsonl");
    write_cfp_log_jsonl(f, run.log);
  }
  {
    const double limit = cfp_limit_density(p);
    const double se = run.density_se();
    std::vector<std::pair<std::string, std::string>> cols{
        {"M", std::to_string(p.M)},
        {"density", format_double(run.density)},
        {"density_se", format_double(se)},
        {"limit_density", format_double(limit)},
        {"limit_z", se > 0.0 ? format_double((run.density - limit) / se) : ""},
        {"mean_degree", format_double(run.mean_degree())},
        {"mutual_dyads", format_double(run.mutual_dyads)},
        {"p_given_reverse", format_double(run.p_given_reverse)},
        {"p_given_no_reverse", format_double(run.p_given_no_reverse)},
        {"events", std::to_string(run.n_events)},
        {"migrations", std::to_string(run.migrations)},
        {"formations", std::to_string(run.formations)},
        {"dissolutions", std::to_string(run.dissolutions)},
        {"noop_formations", std::to_string(run.noop_formations)},
        {"noop_dissolutions", std::to_string(run.noop_dissolutions)},
        {"sim_time", format_double(run.sim_time)},
        {"status", run.hit_event_cap ? "event_cap" : "time_limit"},
    };
    auto f = open_out(rc.output_dir, "summary.csv");
    for (std::size_t k = 0; k < cols.size(); ++k) f << (k ? "," : "") << cols[k].first;
    f << '\n';
    for (std::size_t k = 0; k < cols.size(); ++k) f << (k ? "," : "") << cols[k].second;
    f << '\n';
  }
  write_manifest(rc);
  say(o, std::to_string(run.n_events) + " events, density " + format_double(run.density) + " (limit " +
             format_double(cfp_limit_density(p)) + "); output in " + rc.output_dir.string());
  if (run.hit_event_cap) {
    say(o, "stopped at the event cap");
    return kCap;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-time graph processes with ERGM equilibria"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--seed", o.seed, "Override the configured seed");
  app.add_option("--out", o.out, "Override output.dir");
  app.add_flag("--quiet", o.quiet, "Print nothing on success");
  app.add_option("--threads", o.threads, "OpenMP threads (default: ERGMK_THREADS, else the runtime default)")
      ->check(CLI::PositiveNumber);

  struct Cmd {
    const char* name;
    const char* help;
    int (*run)(const Options&);
  };
  const Cmd cmds[] = {
      {"simulate", "Simulate one trajectory; write events, summary and manifest", cmd_simulate},
      {"verify", "Solve the exact chain and compare with the analytic equilibrium", cmd_verify},
      {"crosscheck", "Compare simulation time averages with MCMC draws from the equilibrium", cmd_crosscheck},
      {"cfp", "Simulate a contact formation process", cmd_cfp},
  };
  int (*selected)(const Options&) = nullptr;
  for (const auto& c : cmds) {
    auto* sub = app.add_subcommand(c.name, c.help)->fallthrough();
    sub->add_option("config", o.config, "JSON run configuration")->required();
    sub->callback([&selected, run = c.run] { selected = run; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  int threads = o.threads;
  if (threads == 0) {
    if (const char* env = std::getenv("ERGMK_THREADS")) {
      try {
        threads = std::stoi(env);
      } catch (const std::exception&) {
        threads = 0;
      }
      if (threads < 1) {
        std::cerr << "ergmk: ERGMK_THREADS must be a positive integer\n";
        return kConfig;
      }
    }
  }
  if (threads > 0) kernels::set_threads(threads);

  try {
    return selected(o);
  } catch (const ConfigError& e) {
    std::cerr << "ergmk: config error: " << e.what() << '\n';
    return kConfig;
  } catch (const CapExceeded& e) {
    std::cerr << "ergmk: " << e.what() << '\n';
    return kCap;
  } catch (const ReducibleChain& e) {
    std::cerr << "ergmk: " << e.what() << '\n';
    return kVerifyFailed;
  } catch (const AbsorbingState& e) {
    std::cerr << "ergmk: " << e.what() << '\n';
    return kAbsorbing;
  } catch (const std::exception& e) {
    std::cerr << "ergmk: " << e.what() << '\n';
    return kRuntime;
  }
}
