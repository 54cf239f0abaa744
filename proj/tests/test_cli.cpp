#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "heatlab/runner.hpp"
#include "heatlab/verify.hpp"

using namespace heatlab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json minimal_config() {
  json cfg;
  cfg["schema_version"] = 1;
  cfg["name"] = "cli-test";
  cfg["manifold"] = {{"kind", "euclidean"}, {"n", 3}};
  cfg["p"] = 2.0;
  cfg["initial_datum"] = {
      {"kind", "gaussian"}, {"amplitude", 0.01}, {"width", 1.0}};
  cfg["solver"] = {{"r_max", 30.0},
                   {"n_grid", 128},
                   {"t_end", 0.5},
                   {"snapshot_times", {0.0, 0.25, 0.5}}};
  return cfg;
}

}  // namespace

TEST_CASE("config parsing is strict about keys and values") {
  json cfg = minimal_config();
  CHECK_NOTHROW(parse_scenario(cfg));

  json bad = cfg;
  bad["reaction"] = 2.0;
  CHECK_THROWS_WITH_AS(parse_scenario(bad), doctest::Contains("reaction"),
                       ConfigError);

  json bad2 = cfg;
  bad2["manifold"]["radius"] = 1.0;
  CHECK_THROWS_WITH_AS(parse_scenario(bad2), doctest::Contains("radius"),
                       ConfigError);

  json bad3 = cfg;
  bad3.erase("schema_version");
  CHECK_THROWS_AS(parse_scenario(bad3), ConfigError);

  json bad4 = cfg;
  bad4["theorem_tag"] = "thm_9_9";
  CHECK_THROWS_AS(parse_scenario(bad4), ConfigError);

  json bad5 = cfg;
  bad5["solver"]["n_grid"] = 4;
  CHECK_THROWS_AS(parse_scenario(bad5), ConfigError);
}

TEST_CASE("missing p is rejected when running") {
  json cfg = minimal_config();
  cfg.erase("p");
  CHECK_NOTHROW(parse_scenario(cfg));  // p is only required to run
  CHECK_THROWS_AS(run_scenario_json(cfg, "out/clitest"), ParameterError);
}

TEST_CASE("scenario run emits report and artifacts") {
  json cfg = minimal_config();
  Report rep = run_scenario_json(cfg, "out/clitest");
  CHECK(fs::exists(rep.path));
  CHECK(fs::exists("out/clitest/cli-test/timeseries.csv"));
  CHECK(fs::exists("out/clitest/cli-test/profile_t0.csv"));
  CHECK(fs::exists("out/clitest/cli-test/profile_t0.5.csv"));
  CHECK(fs::exists("out/clitest/cli-test/supu.svg"));
  CHECK(rep.body["verdicts"]["outcome"]["kind"] == "global_up_to");
  CHECK(rep.body["diagnostics"]["clip_count"].get<long>() == 0);

  // Timeseries header and column count.
  std::ifstream ts("out/clitest/cli-test/timeseries.csv");
  std::string header;
  std::getline(ts, header);
  CHECK(header == "t,sup_u,mass,dt");
}

TEST_CASE("threshold subcommand core") {
  json cfg = minimal_config();
  cfg["barrier"] = {{"family", "eta"}, {"a", 0.1}, {"lambda", 0.6}};
  cfg["initial_datum"]["amplitude"] = 2.0;
  json rep = threshold_report_json(cfg);
  CHECK(rep.contains("mass"));
  CHECK(rep.contains("threshold"));
  CHECK(rep["threshold"].get<double>() == doctest::Approx(0.6));
  CHECK(rep.contains("predicts_blowup"));
  CHECK(rep["parameters"]["weight_family"] == "eta");
}

TEST_CASE("hypothesis validation failures name the constraint") {
  // thm_3_2 on a euclidean manifold has no pinched negative curvature.
  json cfg = minimal_config();
  cfg["theorem_tag"] = "thm_3_2";
  cfg["barrier"] = {{"family", "phi"}, {"lambda", 8.0}, {"h2", 1.0}};
  CHECK_THROWS_WITH_AS(run_scenario_json(cfg, "out/clitest"),
                       doctest::Contains("hypothesis"), ParameterError);

  // thm_4_2 needs the envelope constant.
  json cfg2 = minimal_config();
  cfg2["theorem_tag"] = "thm_4_2";
  cfg2["manifold"] = {{"kind", "hyperbolic"}, {"n", 3}, {"h", 1.0}};
  cfg2["barrier"] = {{"family", "w"}, {"lambda", 0.75}};
  cfg2["initial_datum"] = {
      {"kind", "barrier_multiple"}, {"family", "w"}, {"factor", 0.1}};
  CHECK_THROWS_WITH_AS(run_scenario_json(cfg2, "out/clitest"),
                       doctest::Contains("c_tilde"), ParameterError);

  // cor_5_3 requires p inside the nonexistence range.
  json cfg3 = minimal_config();
  cfg3["theorem_tag"] = "cor_5_3";
  cfg3["p"] = 1.8;
  CHECK_THROWS_WITH_AS(run_scenario_json(cfg3, "out/clitest"),
                       doctest::Contains("cor_5_3"), ParameterError);
}

TEST_CASE("flat-space subcritical scenario under the decaying-Ricci tag") {
  // Euclidean space realizes the decaying Ricci bound with gamma = 1; the
  // nonexistence range is then 1 < p < 5/3.
  json cfg = minimal_config();
  cfg["name"] = "flat-subcritical";
  cfg["theorem_tag"] = "thm_5_2";
  cfg["p"] = 1.4;
  cfg["initial_datum"] = {
      {"kind", "constant_on_ball"}, {"amplitude", 3.0}, {"radius", 2.0}};
  cfg["barrier"] = {{"family", "eta"}, {"a", 0.1}, {"lambda", 0.6}};
  Report rep = run_scenario_json(cfg, "out/clitest");
  const auto& k = rep.body["verdicts"]["kaplan"];
  CHECK(k["threshold"]["value"].get<double>() ==
        doctest::Approx(std::pow(0.6, 2.5)));
  CHECK(k["predicts_blowup"].get<bool>());
  CHECK(rep.body["certificates"][0]["pass"].get<bool>());
}

TEST_CASE("sampled drift passes through the config layer") {
  json cfg = minimal_config();
  cfg["name"] = "sampled-drift";
  cfg["drift"] = {{"kind", "sampled"},
                  {"r", {0.5, 1.0, 2.0, 4.0, 8.0}},
                  {"b", {-0.1, -0.2, -0.1, -0.05, 0.0}},
                  {"bounds", {{"b0", -0.25}, {"div_upper", 3.0}}}};
  cfg["solver"]["scheme"] = "imex_cn";
  Report rep = run_scenario_json(cfg, "out/clitest");
  CHECK(rep.body["verdicts"]["outcome"]["kind"] == "global_up_to");

  auto drift = make_drift(parse_scenario(cfg).drift);
  CHECK(drift.value(1.0) == doctest::Approx(-0.2));
  CHECK(drift.bounds.b0.has_value());
}

TEST_CASE("barrier-check surfaces failing certificates without aborting") {
  json cfg = minimal_config();
  cfg["name"] = "bad-w";
  cfg["manifold"] = {{"kind", "hyperbolic"}, {"n", 3}, {"h", 1.0}};
  // a below the admissible interval: certificate must FAIL but still emit.
  cfg["barrier"] = {{"family", "w"}, {"lambda", 0.75}, {"a", 0.05}};
  cfg.erase("initial_datum");
  cfg.erase("p");
  Scenario sc = parse_scenario(cfg);
  BuiltScenario bs = build_scenario(sc);
  REQUIRE(bs.barriers.size() == 1);
  CHECK_FALSE(bs.barriers[0].certificate().pass());
  json cert = certificate_to_json(bs.barriers[0]);
  CHECK_FALSE(cert["pass"].get<bool>());
}

TEST_CASE("unknown verify suite lists the options") {
  CHECK_THROWS_WITH_AS(run_suite("nonsense"), doctest::Contains("geometry"),
                       UsageError);
}

TEST_CASE("barrier certificates serialize with the report schema") {
  auto m = ModelManifold::hyperbolic(3, 1.0);
  auto none = RadialDriftField::none();
  Barrier w = build_w(m, none, 0.75, 1.0);
  json j = certificate_to_json(w);
  CHECK(j["family"] == "w");
  REQUIRE(j["constraints"].is_array());
  REQUIRE(j["constraints"].size() >= 2);
  for (const auto& row : j["constraints"]) {
    CHECK(row.contains("constraint"));
    CHECK(row.contains("paper_eq"));
    CHECK(row.contains("closed_form_bound"));
    CHECK(row.contains("verified_bound"));
    CHECK(row.contains("max_violation"));
  }
  CHECK(j["pass"].get<bool>());
}

TEST_CASE("small sweep produces the phase CSV") {
  json cfg = minimal_config();
  cfg["name"] = "cli-sweep";
  cfg["solver"]["t_end"] = 0.5;
  cfg["sweep"] = {{"p_values", {1.5, 2.0}}, {"amplitudes", {0.01, 0.1}}};
  fs::create_directories("out/clitest");
  std::ofstream f("out/clitest/sweep-config.json");
  f << cfg.dump();
  f.close();
  const std::string csv = sweep_file("out/clitest/sweep-config.json",
                                     "out/clitest");
  CHECK(fs::exists(csv));
  CHECK(fs::exists("out/clitest/cli-sweep/phase.svg"));
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "p,amplitude,outcome,t_blowup,margin");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 4);

  // An empty axis is a schema error.
  json bad = cfg;
  bad["sweep"]["p_values"] = json::array();
  CHECK_THROWS_AS(parse_scenario(bad), ConfigError);
}
