#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"

using nlohmann::json;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::ContainsSubstring;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  json parsed() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = rsquad::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("rsquad_test_" + name);
}

}  // namespace

TEST_CASE("integrate", "[cli]") {
  const auto r = run({"integrate", "--f", "identity", "--u", "power:r=2"});
  REQUIRE(r.code == 0);
  const auto j = r.parsed();
  CHECK_THAT(j["value"].get<double>(), WithinAbs(2.0 / 3.0, 1e-10));
  CHECK(j["method"] == "reduce-to-riemann");
  const auto s = run({"integrate", "--f", "power:r=0.5", "--u", "step:points=0;left=-1;right=0"});
  CHECK(s.parsed()["value"] == 0.0);
  CHECK(s.parsed()["method"] == "exact-step");
}

TEST_CASE("variation", "[cli]") {
  const auto r = run({"variation", "--f", "sine:freq=6.283185307179586", "--p", "2"});
  REQUIRE(r.code == 0);
  const auto j = r.parsed();
  CHECK_THAT(j["value"].get<double>(), WithinAbs(std::sqrt(6.0), 1e-12));
  CHECK(j["method"] == "exact-extremal-dp");
  CHECK(j["oscillation"] == 2.0);
  CHECK(j["witness"].size() == 4);
  const auto inf = run({"variation", "--f", "identity", "--p", "inf"});
  CHECK(inf.parsed()["method"] == "oscillation");
  const auto sampled = run({"variation", "--f", "identity", "--p", "2", "--sampled"});
  CHECK(sampled.parsed()["exact"] == false);
  const auto csv = run({"variation", "--f", "identity", "--format", "csv"});
  CHECK_THAT(csv.out, ContainsSubstring("point,value,increment"));
}

TEST_CASE("rule", "[cli]") {
  const auto r = run({"rule", "--f", "power:r=2", "--u", "identity", "--nodes", "0.25,0.5,0.75"});
  REQUIRE(r.code == 0);
  CHECK_THAT(r.parsed()["q"].get<double>(), WithinAbs(0.3125, 1e-15));
  CHECK_THAT(r.parsed()["remainder"].get<double>(), WithinAbs(1.0 / 48.0, 1e-10));
  const auto c = run({"rule", "--f", "power:r=2", "--u", "identity", "--preset", "half-nodes", "--cells", "4"});
  REQUIRE(c.code == 0);
  CHECK(c.parsed()["per_cell"].size() == 4);
  CHECK_THAT(c.parsed()["remainder_total"].get<double>(), WithinAbs(1.0 / 768.0, 1e-10));
}

TEST_CASE("certify exit codes", "[cli]") {
  const auto ok = run({"certify", "--f", "power:r=0.5", "--u", "poly:1x", "--nodes", "0.25,0.5,0.75", "--thm", "thm1",
                       "--p", "1"});
  CHECK(ok.code == 0);
  CHECK(ok.parsed()["verdict"] == "holds");

  const auto bad = run({"certify", "--f", "sine:freq=6.283185307179586;phase=1.5707963267948966", "--u",
                        "sine:freq=6.283185307179586", "--thm", "lemma1", "--p", "2", "--nodes", "0,0.5,1"});
  CHECK(bad.code == 1);
  CHECK(bad.parsed()["verdict"] == "violated");

  const auto mismatch = run({"certify", "--f", "identity", "--u", "step:points=0.5;left=0;right=1", "--thm", "thm2",
                             "--nodes", "0.25,0.5,0.75", "--p", "2"});
  CHECK(mismatch.code == 2);
  CHECK_THAT(mismatch.err, ContainsSubstring("Lipschitz"));

  CHECK(run({"certify", "--f", "identity", "--u", "identity", "--nodes", "0.75,0.5,0.25"}).code == 2);
  CHECK(run({"certify", "--f", "nosuch:x=1", "--u", "identity", "--nodes", "0.25,0.5,0.75"}).code == 2);
  CHECK(run({"certify", "--f", "identity", "--u", "identity", "--nodes", "0.25,0.5,0.75", "--p", "0.5"}).code == 2);
  CHECK(run({"certify", "--f", "identity", "--u", "identity"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
}

TEST_CASE("sweep", "[cli]") {
  const auto r = run({"sweep", "--f", "power:r=0.5", "--u", "identity", "--thm", "thm1", "--grid",
                      "t0:0:1:5,x:0:1:5,t1:0:1:5"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::size_t rows = 0;
  std::getline(lines, line);
  CHECK(line == "t0,x,t1,q,integral,remainder_abs,bound,slack,verdict,companion_bound");
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 35);
  CHECK_THAT(r.err, ContainsSubstring("0 violated"));
  const auto j = run({"sweep", "--f", "power:r=0.5", "--u", "identity", "--grid", "t0:0:1:3,x:0:1:3,t1:0:1:3",
                      "--format", "json"});
  CHECK(j.parsed()["summary"]["points"] == 10);
}

TEST_CASE("sharpness", "[cli]") {
  const auto r = run({"sharpness"});
  REQUIRE(r.code == 0);
  const auto j = r.parsed();
  REQUIRE(j.size() == 3);
  int equalities = 0;
  for (const auto& c : j) equalities += c["verdict"] == "equality";
  CHECK(equalities == 2);
  CHECK_THAT(j[0]["lhs"].get<double>(), WithinAbs(std::sqrt(0.5), 1e-15));
  CHECK(j[2]["integral"]["value"] == 1.0);
}

TEST_CASE("config precedence and output files", "[cli]") {
  const auto cfg = scratch("config.json");
  const auto dump = scratch("dump.json");
  const auto out = scratch("out.json");
  {
    std::ofstream(cfg) << R"({"f": "power:r=2", "u": "identity", "nodes": "0.25,0.5,0.75", "tol": 1e-7})";
  }
  const auto r = run({"rule", "--config", cfg.string(), "--f", "identity", "--dump-config", dump.string(), "--out",
                      out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  json resolved;
  std::ifstream(dump) >> resolved;
  CHECK(resolved["f"] == "identity");
  CHECK(resolved["u"] == "identity");
  CHECK(resolved["tol"] == 1e-7);
  CHECK(resolved["command"] == "rule");
  json payload;
  std::ifstream(out) >> payload;
  CHECK_THAT(payload["q"].get<double>(), WithinAbs(0.5 * 0.25 + 0.5 * 0.75, 1e-15));

  // a dumped config replays to the same result
  const auto replay = run({"rule", "--config", dump.string()});
  CHECK(replay.parsed()["q"] == payload["q"]);

  ::setenv("RSQUAD_TOL", "1e-6", 1);
  const auto env_dump = scratch("env.json");
  run({"integrate", "--f", "identity", "--u", "identity", "--dump-config", env_dump.string()});
  json env_cfg;
  std::ifstream(env_dump) >> env_cfg;
  CHECK(env_cfg["tol"] == 1e-6);
  run({"integrate", "--f", "identity", "--u", "identity", "--tol", "1e-8", "--dump-config", env_dump.string()});
  std::ifstream(env_dump) >> env_cfg;
  CHECK(env_cfg["tol"] == 1e-8);
  ::unsetenv("RSQUAD_TOL");

  {
    std::ofstream(cfg) << R"({"f": "identity", "colour": "blue"})";
  }
  CHECK(run({"integrate", "--config", cfg.string()}).code == 2);
  for (const auto& p : {cfg, dump, out, env_dump}) std::filesystem::remove(p);
}
