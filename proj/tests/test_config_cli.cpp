#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ergmk/config.hpp"
#include "ergmk/errors.hpp"
#include "support.hpp"

using namespace ergmk;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ergmk_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path write(const fs::path& p, const Json& j) {
  std::ofstream(p) << j.dump(2);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ERGMK_CLI) + " --quiet " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Json simulate_doc() {
  return Json::parse(R"({
    "version": "1",
    "model": {"family": "lergm", "terms": ["edges", "triangles"], "theta": [-0.5, 0.3], "A": 1.5},
    "sim": {"n": 5, "directed": false, "t_max": 20, "max_events": 100000, "seed": 42}
  })");
}

}  // namespace

TEST_CASE("a minimal config parses with defaults filled in") {
  const RunConfig rc = parse_config(simulate_doc(), "/tmp/base");
  CHECK(rc.n == 5);
  CHECK_FALSE(rc.directed);
  REQUIRE(rc.process);
  CHECK(rc.process->family == Family::LERGM);
  CHECK(rc.process->rate_constant == 1.5);
  CHECK(rc.sim.seed == 42);
  CHECK(rc.sim.max_events == 100000);
  CHECK(rc.has_max_events);
  CHECK(rc.output_dir == fs::path("/tmp/base/out"));
  CHECK(rc.resolved["sim"]["record"] == "events");
  CHECK(rc.resolved["model"]["reference"] == "counting");
  CHECK(rc.resolved["output"]["dir"] == "/tmp/base/out");
}

TEST_CASE("the manifest reparses to the same run") {
  RunConfig rc = parse_config(simulate_doc(), "/tmp/base", {7u, fs::path("/tmp/elsewhere")});
  CHECK(rc.sim.seed == 7);
  const RunConfig again = parse_config(rc.resolved, "/somewhere/else");
  CHECK(again.resolved == rc.resolved);
  CHECK(again.sim.seed == 7);
  CHECK(again.output_dir == fs::path("/tmp/elsewhere"));
}

TEST_CASE("bad configs are rejected") {
  auto rejects = [](auto edit) {
    Json d = simulate_doc();
    edit(d);
    CHECK_THROWS_AS(parse_config(d, "/tmp"), ConfigError);
  };
  rejects([](Json& d) { d.erase("version"); });
  rejects([](Json& d) { d["version"] = "2"; });
  rejects([](Json& d) { d["extra"] = 1; });
  rejects([](Json& d) { d["sim"]["tmax"] = 1; });
  rejects([](Json& d) { d["sim"].erase("n"); });
  rejects([](Json& d) { d["sim"]["n"] = -3; });
  rejects([](Json& d) { d["sim"]["record"] = "everything"; });
  rejects([](Json& d) { d["sim"]["burn_in"] = 50; });
  rejects([](Json& d) { d["model"]["family"] = "ergm"; });
  rejects([](Json& d) { d["model"]["theta"] = Json::array({1.0}); });
  rejects([](Json& d) { d["model"]["terms"] = Json::array({"edges", "mutuals"}); });
  rejects([](Json& d) { d["model"]["terms"] = Json::array({"edges", "stars"}); });
  rejects([](Json& d) { d["model"]["reference"] = "reciprocity"; });
  rejects([](Json& d) { d["model"]["family"] = "ctergm"; });
  rejects([](Json& d) { d["model"]["A"] = 0; });
  rejects([](Json& d) {
    d["model"] = Json::parse(R"({"family": "cstergm-cd", "formation": {"terms": ["edges"], "theta": [0.1]}})");
  });
  rejects([](Json& d) {
    d["model"] = Json::parse(R"({"family": "cstergm-cd", "terms": ["edges"], "theta": [0.1], "theta_d": 0})");
  });
  rejects([](Json& d) { d["sim"]["initial"] = "/nonexistent/graph.txt"; });
  rejects([](Json& d) { d["sampler"] = Json::parse(R"({"thin": 0})"); });
  rejects([](Json& d) { d["cfp"] = Json::parse(R"({"r_m": 1, "r_f": 1})"); });
}

TEST_CASE("terms and references") {
  CHECK(parse_term("edges", 3, ".").kind == TermKind::Edges);
  CHECK(parse_term("twostars", 3, ".").kind == TermKind::TwoStars);
  CHECK_THROWS_AS(parse_term("edgecov:/nonexistent", 3, "."), ConfigError);
  const fs::path dir = scratch("cov");
  std::ofstream(dir / "x.txt") << "0 1 2\n1 0 3\n2 3 0\n";
  const StatisticTerm t = parse_term("edgecov:x.txt", 3, dir);
  CHECK(t.kind == TermKind::EdgeCovariate);
  std::ofstream(dir / "bad.txt") << "0 1\n1 0\n";
  CHECK_THROWS_AS(parse_term("edgecov:bad.txt", 3, dir), ConfigError);
  const ReferenceMeasure r = parse_reference("powerlaw:0.25");
  CHECK(r.kind == ReferenceKind::PowerLaw);
  CHECK(r.gamma == 0.25);
  CHECK_THROWS_AS(parse_reference("powerlaw:x"), ConfigError);
  CHECK_THROWS_AS(parse_reference("sparse"), ConfigError);
}

TEST_CASE("cfp blocks") {
  Json d = Json::parse(R"({
    "version": "1",
    "sim": {"n": 50, "directed": true, "t_max": 1, "max_events": 10},
    "cfp": {"r_m": 100, "r_f": 1, "r_d": 2, "c": 2, "gamma": 0.5, "reciprocity": true}
  })");
  const RunConfig rc = parse_config(d, "/tmp");
  REQUIRE(rc.cfp);
  CHECK(rc.cfp->params.M == cfp_focus_count(50, 2.0, 0.5));
  CHECK(rc.cfp->params.reciprocity);
  CHECK(rc.resolved["cfp"]["c"] == 2.0);
  CHECK(parse_config(rc.resolved, "/").cfp->params.M == rc.cfp->params.M);
  d["sim"]["directed"] = false;
  CHECK_THROWS_AS(parse_config(d, "/tmp"), ConfigError);
}

TEST_CASE("CLI exit codes") {
  const fs::path dir = scratch("codes");
  Json ok = simulate_doc();
  ok["output"]["dir"] = (dir / "ok").string();
  CHECK(run_cli("simulate " + write(dir / "ok.json", ok).string()) == 0);
  CHECK(fs::exists(dir / "ok" / "events.jsonl"));
  CHECK(fs::exists(dir / "ok" / "summary.csv"));
  CHECK(fs::exists(dir / "ok" / "manifest.json"));

  CHECK(run_cli("simulate " + (dir / "missing.json").string()) == 2);
  CHECK(run_cli("frobnicate " + (dir / "ok.json").string()) == 2);
  CHECK(run_cli("simulate --threads 0 " + (dir / "ok.json").string()) == 2);
  std::ofstream(dir / "garbage.json") << "{not json";
  CHECK(run_cli("simulate " + (dir / "garbage.json").string()) == 2);
  Json no_cap = ok;
  no_cap["sim"].erase("max_events");
  CHECK(run_cli("simulate " + write(dir / "no_cap.json", no_cap).string()) == 2);

  Json capped = ok;
  capped["sim"]["max_events"] = 10;
  CHECK(run_cli("simulate " + write(dir / "capped.json", capped).string()) == 4);

  Json absorbing = ok;
  absorbing["model"] = Json::parse(R"({"family": "ctergm", "terms": ["edges"], "theta": [-10000]})");
  CHECK(run_cli("simulate " + write(dir / "absorbing.json", absorbing).string()) == 5);

  Json verify = ok;
  verify["sim"]["n"] = 4;
  CHECK(run_cli("verify " + write(dir / "verify.json", verify).string()) == 0);
  const Json report = Json::parse(slurp(dir / "ok" / "report.json"));
  CHECK(report["tv_distance"].get<double>() <= 1e-9);
  verify["sim"]["n"] = 7;
  CHECK(run_cli("verify " + write(dir / "verify_big.json", verify).string()) == 4);

  // equilibria of a reducible chain cannot be verified
  Json reducible = verify;
  reducible["sim"]["n"] = 3;
  reducible["model"] = Json::parse(R"({"family": "ctergm", "terms": ["edges"], "theta": [-10000]})");
  CHECK(run_cli("verify " + write(dir / "reducible.json", reducible).string()) == 3);
}

TEST_CASE("CLI runs are reproducible byte for byte") {
  const fs::path dir = scratch("repro");
  auto twice = [&](const std::string& cmd, Json doc, const std::vector<std::string>& files) {
    doc["output"]["dir"] = (dir / (cmd + "_a")).string();
    const fs::path a = write(dir / (cmd + "_a.json"), doc);
    doc["output"]["dir"] = (dir / (cmd + "_b")).string();
    const fs::path b = write(dir / (cmd + "_b.json"), doc);
    const int ra = run_cli(cmd + " " + a.string());
    CHECK(ra == run_cli(cmd + " " + b.string()));
    for (const auto& f : files) {
      INFO(cmd << " " << f);
      const std::string sa = slurp(dir / (cmd + "_a") / f);
      CHECK_FALSE(sa.empty());
      CHECK(sa == slurp(dir / (cmd + "_b") / f));
    }
    return ra;
  };
  CHECK(twice("simulate", simulate_doc(), {"events.jsonl", "summary.csv"}) == 0);

  Json verify = simulate_doc();
  verify["sim"]["n"] = 4;
  CHECK(twice("verify", verify, {"report.json"}) == 0);

  Json cross = simulate_doc();
  cross["model"] = Json::parse(R"({"family": "stability", "terms": ["edges"], "theta": [0.2], "A": 1})");
  cross["sim"]["n"] = 4;
  cross["sim"]["t_max"] = 500;
  cross["sim"]["burn_in"] = 5;
  cross["sim"]["record"] = "averages";
  cross["sampler"] = Json::parse(R"({"burn_in": 1000, "thin": 5, "samples": 20000})");
  CHECK(twice("crosscheck", cross, {"summary.csv", "samples.csv", "crosscheck.json"}) == 0);

  Json cfp = Json::parse(R"({
    "version": "1",
    "sim": {"n": 6, "directed": false, "t_max": 5, "max_events": 1000000, "seed": 3},
    "cfp": {"r_m": 10, "r_f": 1, "r_d": 1, "M": 3}
  })");
  CHECK(twice("cfp", cfp, {"events.jsonl", "summary.csv"}) == 0);
}

TEST_CASE("re-running a manifest reproduces the run") {
  const fs::path dir = scratch("manifest");
  Json doc = simulate_doc();
  doc["output"]["dir"] = (dir / "first").string();
  REQUIRE(run_cli("simulate " + write(dir / "first.json", doc).string()) == 0);
  const std::string events = slurp(dir / "first" / "events.jsonl");
  fs::copy_file(dir / "first" / "manifest.json", dir / "manifest.json");
  REQUIRE(run_cli("simulate --out " + (dir / "second").string() + " " + (dir / "manifest.json").string()) == 0);
  CHECK(slurp(dir / "second" / "events.jsonl") == events);
  // a seed override changes the trajectory
  REQUIRE(run_cli("simulate --seed 43 --out " + (dir / "third").string() + " " + (dir / "manifest.json").string()) == 0);
  CHECK(slurp(dir / "third" / "events.jsonl") != events);
  CHECK(Json::parse(slurp(dir / "third" / "manifest.json"))["sim"]["seed"] == 43);
}
