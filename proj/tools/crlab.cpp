// crlab: structure | verify | spectrum | pipeline
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 configuration or model error.

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "crlab/cli.hpp"
#include "crlab/errors.hpp"

namespace {

struct Options {
  std::optional<std::string> config;
  std::optional<std::string> model;
  std::optional<std::string> base;
  std::optional<double> a;
  std::optional<double> eps;
  std::optional<std::string> g;
  std::optional<std::string> f;
  std::optional<int> n;
  std::optional<int> J;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  bool json = false;
  std::string suite = "identities";
};

void add_common(CLI::App* app, Options& o) {
  app->add_option("--config", o.config, "JSON run configuration");
  app->add_option("--model", o.model, "sphere | left_invariant | perturbed");
  app->add_option("--base", o.base, "base model of a perturbation: sphere | left_invariant");
  app->add_option("--a", o.a, "left-invariant deformation parameter");
  app->add_option("--eps", o.eps, "perturbation amplitude");
  app->add_option("--g", o.g, "conformal exponent: name or coefficient list");
  app->add_option("--f", o.f, "pseudo-Einstein freedom: name or coefficient list");
  app->add_option("--n", o.n, "truncation degree N");
  app->add_option("--J", o.J, "exponential series order");
  app->add_option("--out", o.out, "output directory for report.json / report.csv");
  app->add_option("--seed", o.seed, "random seed");
  app->add_flag("--json", o.json, "print the JSON report instead of the table");
}

crlab::RunConfig make_config(const Options& o) {
  crlab::RunConfig cfg;
  if (o.config) {
    std::ifstream in(*o.config);
    if (!in) throw crlab::ConfigError("cannot open config " + *o.config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw crlab::ConfigError(std::string("config: ") + e.what());
    }
    cfg = crlab::config_from_json(j);
  }
  if (o.n) cfg.N = *o.n;
  if (o.J) cfg.J = *o.J;
  if (o.eps) cfg.eps = *o.eps;
  if (o.g) cfg.g = crlab::parse_exponent(*o.g);
  if (o.f) cfg.f = crlab::parse_exponent(*o.f);
  if (o.out) cfg.out = *o.out;
  if (o.seed) cfg.seed = *o.seed;
  // a changed eps, g or J rebuilds a perturbed model from its base kind
  std::optional<std::string> kind = o.model;
  std::optional<std::string> base = o.base;
  if (!kind && cfg.model.kind == crlab::ModelSpec::Kind::ConformalPerturb && (o.eps || o.g || o.J)) {
    kind = "perturbed";
    const auto& b = *cfg.model.base;
    if (!base) base = b.kind == crlab::ModelSpec::Kind::LeftInvariant ? "left_invariant" : "sphere";
  }
  std::optional<double> a = o.a;
  if (!a && base == "left_invariant" && cfg.model.kind == crlab::ModelSpec::Kind::ConformalPerturb)
    a = cfg.model.base->a;
  crlab::apply_model_options(cfg, {kind, base, a});
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudohermitian geometry laboratory on S^3"};
  app.require_subcommand(1);
  Options o;
  auto* structure = app.add_subcommand("structure", "solve the structure equations of a model");
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  auto* spectrum = app.add_subcommand("spectrum", "Galerkin spectrum of P0 and the eigenvalue bound");
  auto* pipeline = app.add_subcommand("pipeline", "sigma -> Kohn decomposition -> pseudo-Einstein contact form");
  for (auto* s : {structure, verify, spectrum, pipeline}) add_common(s, o);
  verify->add_option("--suite", o.suite, "identities | commutation | transforms | bochner | convexity")
      ->check(CLI::IsMember({"identities", "commutation", "transforms", "bochner", "convexity"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const crlab::RunConfig cfg = make_config(o);
    std::optional<crlab::Report> report;
    if (structure->parsed()) report = crlab::cmd_structure(cfg);
    else if (verify->parsed()) report = crlab::cmd_verify(cfg, o.suite);
    else if (spectrum->parsed()) report = crlab::cmd_spectrum(cfg);
    else report = crlab::cmd_pipeline(cfg);

    if (o.json) std::cout << report->to_json().dump(2) << '\n';
    else std::cout << report->to_table();
    crlab::write_outputs(cfg, *report);
    return report->all_pass() ? 0 : 1;
  } catch (const crlab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
