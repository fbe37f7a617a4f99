#include "ergmk/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ergmk/errors.hpp"
#include "ergmk/rng.hpp"

namespace fs = std::filesystem;

namespace ergmk {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, _] : obj.items())
    if (!ok.count(k)) fail("unknown key '" + k + "' in " + where);
}

const Json* find(const Json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number(const Json& v, const std::string& what) {
  if (!v.is_number()) fail(what + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(what + " must be finite");
  return x;
}

std::uint64_t count(const Json& v, const std::string& what) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  fail(what + " must be a non-negative integer");
}

bool boolean(const Json& v, const std::string& what) {
  if (!v.is_boolean()) fail(what + " must be true or false");
  return v.get<bool>();
}

std::string text(const Json& v, const std::string& what) {
  if (!v.is_string()) fail(what + " must be a string");
  return v.get<std::string>();
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  if (path.is_relative()) path = base / path;
  return fs::absolute(path).lexically_normal();
}

Covariate read_covariate(const fs::path& path, int n) {
  std::ifstream in(path);
  if (!in) fail("cannot open covariate file " + path.string());
  Covariate x;
  x.n = n;
  double v;
  while (in >> v) x.values.push_back(v);
  if (!in.eof()) fail("non-numeric entry in covariate file " + path.string());
  if (x.values.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    fail("covariate file " + path.string() + " must hold an n x n matrix");
  return x;
}

struct ParsedPotential {
  PotentialSpec spec;
  Json resolved;
};

ParsedPotential parse_potential(const Json& obj, const std::string& where, int n, const fs::path& base,
                                bool allow_extra_keys) {
  if (!allow_extra_keys) check_keys(obj, where, {"terms", "theta", "reference"});
  const Json* terms = find(obj, "terms");
  const Json* theta = find(obj, "theta");
  if (!terms || !terms->is_array() || terms->empty()) fail(where + ".terms must be a non-empty array");
  if (!theta || !theta->is_array()) fail(where + ".theta must be an array");
  if (terms->size() != theta->size()) fail(where + ".theta must have one entry per term");
  ParsedPotential out;
  Json rterms = Json::array();
  std::vector<StatisticTerm> ts;
  std::vector<double> th;
  for (std::size_t k = 0; k < terms->size(); ++k) {
    const std::string key = text((*terms)[k], where + ".terms[]");
    ts.push_back(parse_term(key, n, base));
    rterms.push_back(key.rfind("edgecov:", 0) == 0 ? "edgecov:" + resolve(base, key.substr(8)).string() : key);
    th.push_back(number((*theta)[k], where + ".theta[]"));
  }
  std::string ref = "counting";
  if (const Json* r = find(obj, "reference")) ref = text(*r, where + ".reference");
  out.spec = PotentialSpec(std::move(ts), th, parse_reference(ref));
  out.resolved["terms"] = rterms;
  out.resolved["theta"] = th;
  out.resolved["reference"] = ref;
  return out;
}

}  // namespace

StatisticTerm parse_term(const std::string& key, int n, const fs::path& base_dir) {
  if (key == "edges") return StatisticTerm::edges();
  if (key == "mutuals") return StatisticTerm::mutuals();
  if (key == "triangles") return StatisticTerm::triangles();
  if (key == "twostars") return StatisticTerm::two_stars();
  if (key.rfind("edgecov:", 0) == 0 && key.size() > 8)
    return StatisticTerm::edge_covariate(read_covariate(resolve(base_dir, key.substr(8)), n));
  fail("unknown term key '" + key + "'");
}

ReferenceMeasure parse_reference(const std::string& key) {
  if (key == "counting") return {ReferenceKind::Counting, 1.0};
  if (key == "krivitsky") return {ReferenceKind::KrivitskySparse, 1.0};
  if (key == "reciprocity") return {ReferenceKind::ReciprocitySparse, 1.0};
  if (key.rfind("powerlaw:", 0) == 0) {
    const std::string g = key.substr(9);
    std::size_t used = 0;
    double gamma = 0.0;
    try {
      gamma = std::stod(g, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != g.size() || !std::isfinite(gamma)) fail("bad power-law exponent in '" + key + "'");
    return {ReferenceKind::PowerLaw, gamma};
  }
  fail("unknown reference measure '" + key + "'");
}

RunConfig parse_config(const Json& doc, const fs::path& base_dir, const ConfigOverrides& over) {
  check_keys(doc, "config", {"version", "model", "sim", "output", "sampler", "cfp"});
  const Json* version = find(doc, "version");
  if (!version) fail("missing required key 'version'");
  if (text(*version, "version") != kConfigVersion)
    fail("unsupported config version '" + version->get<std::string>() + "' (expected " + kConfigVersion + ")");

  RunConfig rc;
  Json& out = rc.resolved;
  out["version"] = kConfigVersion;

  // sim
  const Json* sim = find(doc, "sim");
  if (!sim) fail("missing required block 'sim'");
  check_keys(*sim, "sim",
             {"n", "directed", "t_max", "max_events", "seed", "record", "burn_in", "initial", "observables", "batches",
              "coherence_interval", "incremental"});
  const Json* n = find(*sim, "n");
  const Json* directed = find(*sim, "directed");
  if (!n) fail("missing required key sim.n");
  if (!directed) fail("missing required key sim.directed");
  const auto nv = count(*n, "sim.n");
  if (nv < 1 || nv > 100000) fail("sim.n out of range");
  rc.n = static_cast<int>(nv);
  rc.directed = boolean(*directed, "sim.directed");
  Json rsim;
  rsim["n"] = rc.n;
  rsim["directed"] = rc.directed;

  SimConfig& sc = rc.sim;
  if (const Json* v = find(*sim, "t_max")) {
    sc.t_max = number(*v, "sim.t_max");
    if (!(sc.t_max > 0.0)) fail("sim.t_max must be positive");
    rsim["t_max"] = sc.t_max;
  }
  if (const Json* v = find(*sim, "max_events")) {
    sc.max_events = count(*v, "sim.max_events");
    rc.has_max_events = true;
    rsim["max_events"] = sc.max_events;
  }
  sc.seed = over.seed ? *over.seed : (find(*sim, "seed") ? count(*find(*sim, "seed"), "sim.seed") : 0);
  rsim["seed"] = sc.seed;
  std::string record = "events";
  if (const Json* v = find(*sim, "record")) record = text(*v, "sim.record");
  if (record == "events") sc.record = RecordMode::FullEvents;
  else if (record == "statistics") sc.record = RecordMode::StatisticsOnly;
  else if (record == "averages") sc.record = RecordMode::TimeAverages;
  else fail("sim.record must be one of events, statistics, averages");
  rsim["record"] = record;
  if (const Json* v = find(*sim, "burn_in")) sc.burn_in = number(*v, "sim.burn_in");
  if (sc.burn_in < 0.0 || sc.burn_in >= sc.t_max) fail("sim.burn_in must lie in [0, t_max)");
  rsim["burn_in"] = sc.burn_in;
  if (const Json* v = find(*sim, "batches")) {
    const auto b = count(*v, "sim.batches");
    if (b < 2 || b > 100000) fail("sim.batches must be in [2, 100000]");
    sc.batches = static_cast<int>(b);
  }
  rsim["batches"] = sc.batches;
  if (const Json* v = find(*sim, "coherence_interval")) sc.coherence_interval = count(*v, "sim.coherence_interval");
  rsim["coherence_interval"] = sc.coherence_interval;
  if (const Json* v = find(*sim, "incremental")) sc.incremental = boolean(*v, "sim.incremental");
  rsim["incremental"] = sc.incremental;

  sc.initial = Graph(rc.n, rc.directed);
  if (const Json* v = find(*sim, "initial")) {
    const fs::path p = resolve(base_dir, text(*v, "sim.initial"));
    std::ifstream in(p);
    if (!in) fail("cannot open initial graph " + p.string());
    try {
      sc.initial = read_edge_list(in);
    } catch (const std::exception& e) {
      fail("initial graph " + p.string() + ": " + e.what());
    }
    if (sc.initial.n() != rc.n || sc.initial.directed() != rc.directed)
      fail("initial graph does not match sim.n / sim.directed");
    rsim["initial"] = p.string();
  }
  if (const Json* v = find(*sim, "observables")) {
    if (!v->is_array()) fail("sim.observables must be an array");
    Json robs = Json::array();
    for (const auto& t : *v) {
      const std::string key = text(t, "sim.observables[]");
      sc.observables.push_back(parse_term(key, rc.n, base_dir));
      robs.push_back(key.rfind("edgecov:", 0) == 0 ? "edgecov:" + resolve(base_dir, key.substr(8)).string() : key);
    }
    rsim["observables"] = robs;
  }

  // model
  if (const Json* model = find(doc, "model")) {
    check_keys(*model, "model",
               {"family", "terms", "theta", "reference", "A", "theta_d", "theta_f", "formation", "dissolution"});
    const Json* fam = find(*model, "family");
    if (!fam) fail("missing required key model.family");
    const std::string key = text(*fam, "model.family");
    const auto family = family_from_key(key);
    if (!family) fail("unknown family '" + key + "'");
    ProcessSpec ps;
    ps.family = *family;
    Json rmodel;
    rmodel["family"] = key;
    const bool separable = *family == Family::ConstDissCSTERGM || *family == Family::ConstFormCSTERGM ||
                           *family == Family::GeneralCSTERGM;
    if (separable) {
      for (const char* k : {"terms", "theta", "reference"})
        if (find(*model, k)) fail(std::string("model.") + k + " is not used by " + key + "; use formation/dissolution");
    } else {
      for (const char* k : {"formation", "dissolution"})
        if (find(*model, k)) fail(std::string("model.") + k + " is not used by " + key);
      auto p = parse_potential(*model, "model", rc.n, base_dir, true);
      ps.potential = p.spec;
      for (auto& [k, v] : p.resolved.items()) rmodel[k] = v;
    }
    if (const Json* v = find(*model, "A")) {
      if (!ps.uses_rate_constant()) fail("model.A is not used by " + key);
      ps.rate_constant = number(*v, "model.A");
    }
    if (ps.uses_rate_constant()) rmodel["A"] = ps.rate_constant;
    if (const Json* v = find(*model, "theta_d")) ps.theta_d = number(*v, "model.theta_d");
    if (const Json* v = find(*model, "theta_f")) ps.theta_f = number(*v, "model.theta_f");
    if (const Json* v = find(*model, "formation")) {
      auto p = parse_potential(*v, "model.formation", rc.n, base_dir, false);
      ps.formation = p.spec;
      rmodel["formation"] = p.resolved;
    }
    if (const Json* v = find(*model, "dissolution")) {
      auto p = parse_potential(*v, "model.dissolution", rc.n, base_dir, false);
      ps.dissolution = p.spec;
      rmodel["dissolution"] = p.resolved;
    }
    if (ps.theta_d) rmodel["theta_d"] = *ps.theta_d;
    if (ps.theta_f) rmodel["theta_f"] = *ps.theta_f;
    try {
      validate(ps, sc.initial);
      for (const auto& t : sc.observables) check_compatible(t, sc.initial);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    sc.process = ps;
    rc.process = ps;
    out["model"] = rmodel;
  }
  out["sim"] = rsim;

  // output
  fs::path dir = "out";
  if (const Json* o = find(doc, "output")) {
    check_keys(*o, "output", {"dir"});
    if (const Json* v = find(*o, "dir")) dir = text(*v, "output.dir");
  }
  rc.output_dir = over.output_dir ? fs::absolute(*over.output_dir).lexically_normal() : resolve(base_dir, dir.string());
  out["output"]["dir"] = rc.output_dir.string();

  if (const Json* s = find(doc, "sampler")) {
    check_keys(*s, "sampler", {"burn_in", "thin", "samples", "batches", "threshold"});
    SamplerSettings ss;
    if (const Json* v = find(*s, "burn_in")) ss.burn_in = count(*v, "sampler.burn_in");
    if (const Json* v = find(*s, "thin")) ss.thin = count(*v, "sampler.thin");
    if (const Json* v = find(*s, "samples")) ss.samples = count(*v, "sampler.samples");
    if (const Json* v = find(*s, "batches")) ss.batches = static_cast<int>(count(*v, "sampler.batches"));
    if (const Json* v = find(*s, "threshold")) ss.threshold = number(*v, "sampler.threshold");
    if (ss.thin < 1) fail("sampler.thin must be >= 1");
    if (ss.batches < 2) fail("sampler.batches must be >= 2");
    if (ss.samples < static_cast<std::uint64_t>(ss.batches)) fail("sampler.samples must be at least sampler.batches");
    if (!(ss.threshold > 0.0)) fail("sampler.threshold must be positive");
    ss.seed = derive_seed(sc.seed, 1u << 20);
    rc.sampler = ss;
    out["sampler"] = Json{{"burn_in", ss.burn_in}, {"thin", ss.thin},       {"samples", ss.samples},
                          {"batches", ss.batches}, {"threshold", ss.threshold}};
  }

  if (const Json* c = find(doc, "cfp")) {
    check_keys(*c, "cfp", {"r_m", "r_f", "r_d", "M", "c", "gamma", "reciprocity"});
    CfpSettings cs;
    for (auto [k, dst] : {std::pair{"r_m", &cs.params.r_m}, {"r_f", &cs.params.r_f}, {"r_d", &cs.params.r_d}}) {
      const Json* v = find(*c, k);
      if (!v) fail(std::string("missing required key cfp.") + k);
      *dst = number(*v, std::string("cfp.") + k);
    }
    const Json* m = find(*c, "M");
    const Json* cc = find(*c, "c");
    const Json* g = find(*c, "gamma");
    if (m && (cc || g)) fail("give either cfp.M or cfp.c / cfp.gamma, not both");
    if (m) {
      const auto mv = count(*m, "cfp.M");
      if (mv < 1 || mv > 1000000) fail("cfp.M out of range");
      cs.params.M = static_cast<int>(mv);
    } else if (cc) {
      cs.c = number(*cc, "cfp.c");
      cs.gamma = g ? number(*g, "cfp.gamma") : 0.0;
      if (!(*cs.c > 0.0)) fail("cfp.c must be positive");
      cs.params.M = cfp_focus_count(rc.n, *cs.c, *cs.gamma);
    } else {
      fail("cfp needs M or c (with optional gamma)");
    }
    if (const Json* v = find(*c, "reciprocity")) cs.params.reciprocity = boolean(*v, "cfp.reciprocity");
    try {
      validate(cs.params);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    if (cs.params.reciprocity && !rc.directed) fail("cfp.reciprocity needs sim.directed = true");
    Json rc_cfp{{"r_m", cs.params.r_m}, {"r_f", cs.params.r_f}, {"r_d", cs.params.r_d}};
    if (cs.c) {
      rc_cfp["c"] = *cs.c;
      rc_cfp["gamma"] = *cs.gamma;
    } else {
      rc_cfp["M"] = cs.params.M;
    }
    rc_cfp["reciprocity"] = cs.params.reciprocity;
    rc.cfp = cs;
    out["cfp"] = rc_cfp;
  }
  return rc;
}

RunConfig load_config(const fs::path& path, const ConfigOverrides& over) {
  std::ifstream in(path);
  if (!in) fail("cannot open config " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc, fs::absolute(path).parent_path(), over);
}

}  // namespace ergmk
