#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fhlab/scenario.hpp"

using namespace fhlab;

namespace {

ScenarioConfig config(const std::string& scenario) {
  ScenarioConfig c;
  c.scenario = scenario;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("reports are functions of the configuration") {
  auto c = config("axioms");
  c.model = "matrix";
  c.dim = 6;
  c.samples = 20;
  const auto a = run_scenario(c);
  const auto b = run_scenario(c);
  CHECK(a.report.dump() == b.report.dump());
  CHECK(assertions_csv(a) == assertions_csv(b));
  CHECK(a.pass());
  CHECK(a.exit_code() == 0);
  CHECK(a.report["schema"] == 1);
  CHECK(a.report["status"] == "pass");

  c.seed = 1;
  CHECK(run_scenario(c).report.dump() != a.report.dump());
}

TEST_CASE("planted defects fail with exit code 2") {
  auto c = config("axioms");
  c.dim = 6;
  c.samples = 10;
  c.mutations = {"product=dropconj"};
  const auto r = run_scenario(c);
  CHECK_FALSE(r.pass());
  CHECK(r.exit_code() == 2);
  REQUIRE(r.report["witness_replay"].size() >= 1);
  CHECK(r.report["witness_replay"][0]["above_tolerance"] == true);
}

TEST_CASE("usage errors") {
  CHECK_THROWS_AS(run_scenario(config("nonsense")), UsageError);
  auto c = config("axioms");
  c.model = "tensor";
  CHECK_THROWS_AS(run_scenario(c), UsageError);
  c = config("axioms");
  c.mutations = {"product"};
  CHECK_THROWS_AS(run_scenario(c), UsageError);
  c = config("axioms");
  c.tol = 0.0;
  CHECK_THROWS_AS(run_scenario(c), UsageError);
  c = config("representation");
  c.ladder = {4, 8};
  CHECK_THROWS_AS(run_scenario(c), UsageError);
  c = config("moyal-check");
  c.model = "transported";
  CHECK_THROWS_AS(run_scenario(c), UsageError);
  c = config("moyal-check");
  c.element = "/nonexistent/element.json";
  CHECK_THROWS_AS(run_scenario(c), UsageError);

  CHECK_THROWS_AS(parse_family_spec("weyl-heisenberg:1"), UsageError);
  CHECK_THROWS_AS(parse_family_spec("weyl-heisenberg:x"), UsageError);
  CHECK_THROWS_AS(parse_family_spec("random:3,2"), UsageError);
  CHECK_THROWS_AS(parse_family_spec("random:3,2,0"), UsageError);
  CHECK_THROWS_AS(parse_family_spec("circle:3"), UsageError);
  CHECK(parse_family_spec("weyl-heisenberg:3").size() == 9);
  CHECK(parse_family_spec("random:10,3,1").size() == 10);
}

TEST_CASE("quantize scenario") {
  auto c = config("quantize");
  c.family = "random:18,3,5";
  c.samples = 10;
  const auto r = run_scenario(c);
  CHECK(r.pass());
  CHECK(r.report["projector_rank"] == 9);
  CHECK(r.report["complement_dimension"] == 9);
}

TEST_CASE("outputs on disk") {
  auto c = config("quantize");
  c.family = "weyl-heisenberg:2";
  c.samples = 5;
  const auto r = run_scenario(c);
  const auto dir = std::filesystem::temp_directory_path() / "fhlab_scenario_test";
  std::filesystem::remove_all(dir);
  write_outputs(r, (dir / "sub" / "q.json").string(), io::Json{{"generated_at", "now"}});
  CHECK(slurp(dir / "sub" / "q.json") == r.report.dump(2) + "\n");
  const auto csv = slurp(dir / "sub" / "q.csv");
  CHECK(csv.rfind("assertion,value,limit,status\n", 0) == 0);
  CHECK(csv.find("tightness,1,1,pass") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "sub" / "q.meta.json"));
  CHECK(slurp(dir / "sub" / "q.json").find("generated_at") == std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("assertion names with commas are quoted") {
  ScenarioResult r;
  r.assertions.push_back({"a,b", 0.5, 1.0, true});
  r.assertions.push_back({"say \"hi\"", 0.0, 0.0, true});
  CHECK(assertions_csv(r) == "assertion,value,limit,status\n\"a,b\",0.5,1,pass\n\"say \"\"hi\"\"\",0,0,pass\n");
}
