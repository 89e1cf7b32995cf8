#pragma once

// Run configuration and the four commands behind the crlab executable.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "crlab/report.hpp"
#include "crlab/structures.hpp"

namespace crlab {

struct Tolerances {
  double structure = 1e-9;     // exact models
  double structure_perturbed = 1e-7;
  double commutation = 1e-8;
  double transform = 1e-5;
  double bochner = 1e-4;
  double bochner_intermediate = 1e-5;
  double spectral = 1e-8;
  double nonnegative = 1e-6;
  double pipeline_eq0 = 1e-5;
  double pipeline_w1 = 1e-4;
  double sasakian_gamma = 1e-8;
  double convexity = 1e-6;
};

struct RunConfig {
  ModelSpec model = ModelSpec::sphere();
  int N = 8;
  int J = 12;
  double eps = 0.1;
  Field g;  // conformal exponent for perturbed models and the transforms suite
  Field f;  // pseudo-Einstein freedom in the pipeline
  Tolerances tol;
  std::string out;  // output directory, empty for stdout only
  std::uint64_t seed = 20240607;

  /// Throws ConfigError unless N <= 12, 0 < eps <= 0.25 and J >= 1.
  void validate() const;
};

/// Named exponents: zero, re_zwbar, im_zwbar, re_zw, im_zw, re_z, re_w, zzbar;
/// otherwise a JSON coefficient list [[a, b, c, d, re, im], ...] or a Field
/// object {"terms": [...]}. Throws ConfigError.
Field parse_exponent(const std::string& text);
Field exponent_from_json(const nlohmann::json& j);

/// Keys: model, N, J, eps, g, f, out, seed, tolerances. Throws ConfigError.
RunConfig config_from_json(const nlohmann::json& j);

struct ModelOptions {
  std::optional<std::string> kind;  // sphere | left_invariant | perturbed
  std::optional<std::string> base;  // base kind for perturbed
  std::optional<double> a;
};
/// Applies command-line model options on top of cfg (eps, g and J taken from cfg).
void apply_model_options(RunConfig& cfg, const ModelOptions& opt);

Report cmd_structure(const RunConfig& cfg);
/// suite: identities | commutation | transforms | bochner | convexity
Report cmd_verify(const RunConfig& cfg, const std::string& suite);
Report cmd_spectrum(const RunConfig& cfg);
Report cmd_pipeline(const RunConfig& cfg);

/// Writes report.json and report.csv (and spectrum.csv when present in the
/// report data) into cfg.out.
void write_outputs(const RunConfig& cfg, const Report& report);

}  // namespace crlab
