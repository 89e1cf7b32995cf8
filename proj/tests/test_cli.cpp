#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "crlab/cli.hpp"
#include "crlab/errors.hpp"

using namespace crlab;

TEST_CASE("report rows") {
  Report r("demo");
  r.add("small", "eq 1", 1e-12, 1e-9);
  r.add("large", "eq 2", 1e-3, 1e-9);
  r.add("nan", "eq 3", std::nan(""), 1e-9);
  r.add_info("measured", "eq 4", -5.0, "note, with comma");
  r.add_condition("flag", "eq 5", true, 3.0);
  CHECK(r.failures() == 2);
  CHECK_FALSE(r.all_pass());
  const auto j = r.to_json();
  CHECK(j.at("checks").size() == 5);
  CHECK(j.at("checks")[2].at("residual") == "nan");
  CHECK(j.at("checks")[3].at("informational") == true);
  CHECK_FALSE(j.dump().find("wall_time") != std::string::npos);
  const std::string csv = r.to_csv();
  CHECK(csv.find("\"note, with comma\"") == std::string::npos);  // notes are not in the CSV
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  CHECK(r.to_table().find("2 check(s) failed") != std::string::npos);
}

TEST_CASE("empty anchors are rejected") {
  Report r("demo");
  r.add("row", "", 0.0, 1.0);
  CHECK_THROWS_AS(r.to_json(), Error);
}

TEST_CASE("named and listed exponents") {
  const Field a = parse_exponent("re_zwbar");
  const Field b = parse_exponent("[[1,0,0,1,0.5],[0,1,1,0,0.5]]");
  CHECK(sup_norm(a - b) < 1e-15);
  CHECK(parse_exponent("zero").is_zero());
  CHECK_THROWS_AS(parse_exponent("nonsense"), ConfigError);
  CHECK_THROWS_AS(parse_exponent("[[1,0,0]]"), ConfigError);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(config_from_json({{"N", 13}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"eps", 0.5}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"f", "im_zw"}, {"N", "x"}}), ConfigError);
  const RunConfig cfg = config_from_json(
      {{"model", {{"kind", "perturbed"}, {"base", {{"kind", "left_invariant"}, {"a", 1.2}}}}}, {"N", 4}, {"eps", 0.05}});
  CHECK(cfg.model.kind == ModelSpec::Kind::ConformalPerturb);
  CHECK(cfg.model.eps == doctest::Approx(0.05));
  CHECK(cfg.model.base->a == doctest::Approx(1.2));
  CHECK(cfg.N == 4);
}

TEST_CASE("model options") {
  RunConfig cfg;
  apply_model_options(cfg, {std::string("left_invariant"), std::nullopt, 1.3});
  CHECK(cfg.model.kind == ModelSpec::Kind::LeftInvariant);
  CHECK(cfg.model.a == doctest::Approx(1.3));
  CHECK_THROWS_AS(apply_model_options(cfg, {std::string("torus"), std::nullopt, std::nullopt}), ConfigError);
}

TEST_CASE("structure command and outputs") {
  RunConfig cfg;
  cfg.out = (std::filesystem::temp_directory_path() / "crlab_test_cli").string();
  std::filesystem::remove_all(cfg.out);
  const Report r = cmd_structure(cfg);
  CHECK(r.all_pass());
  for (const auto& c : r.checks()) CHECK_FALSE(c.anchor.empty());
  write_outputs(cfg, r);
  CHECK(std::filesystem::exists(std::filesystem::path(cfg.out) / "report.json"));
  CHECK(std::filesystem::exists(std::filesystem::path(cfg.out) / "report.csv"));
}

TEST_CASE("json output is deterministic") {
  RunConfig cfg;
  apply_model_options(cfg, {std::string("perturbed"), std::nullopt, std::nullopt});
  CHECK(cmd_verify(cfg, "commutation").to_json() == cmd_verify(cfg, "commutation").to_json());
}

TEST_CASE("verify suites on the sphere") {
  RunConfig cfg;
  cfg.N = 4;
  for (const char* s : {"identities", "commutation", "bochner", "convexity"}) {
    CAPTURE(s);
    CHECK(cmd_verify(cfg, s).all_pass());
  }
  // only the row with the stated Q coefficient fails
  const Report t = cmd_verify(cfg, "transforms");
  CHECK(t.failures() == 1);
  for (const auto& c : t.checks())
    if (!c.pass) CHECK(c.name == "Q law, coefficient 3/4");
  CHECK_THROWS_AS(cmd_verify(cfg, "unknown"), ConfigError);
}

TEST_CASE("spectrum and pipeline") {
  RunConfig cfg;
  cfg.N = 4;
  const Report s = cmd_spectrum(cfg);
  CHECK(s.all_pass());
  CHECK(s.data().contains("spectrum"));
  CHECK(cmd_pipeline(cfg).all_pass());
}
