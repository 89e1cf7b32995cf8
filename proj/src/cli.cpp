#include "crlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include "crlab/analysis.hpp"
#include "crlab/errors.hpp"
#include "crlab/hodge.hpp"
#include "crlab/spectral.hpp"

namespace crlab {

namespace {

constexpr Complex kI{0.0, 1.0};

StructureData solve(const ModelSpec& spec) { return solve_structure(build_coframe(spec)); }

bool is_perturbed(const ModelSpec& spec) { return spec.kind == ModelSpec::Kind::ConformalPerturb; }

const ModelSpec& root_of(const ModelSpec& spec) { return is_perturbed(spec) ? root_of(*spec.base) : spec; }

// CR structures conformal to the standard sphere; P0 >= 0 and ker P0 = crph there.
bool standard_cr(const ModelSpec& spec) {
  const ModelSpec& r = root_of(spec);
  return r.kind == ModelSpec::Kind::StandardSphere || (r.kind == ModelSpec::Kind::LeftInvariant && r.a == 1.0);
}

template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(name + ": " + e.what());
  }
}

Field product(const Field& x, const Field& y) { return multiply(x, y); }

double model_tol(const RunConfig& cfg, double exact, double perturbed) {
  return is_perturbed(cfg.model) ? perturbed : exact;
}

nlohmann::json model_json(const RunConfig& cfg) { return to_json(cfg.model); }

// sigma, Kohn decomposition, u and Q shared by several commands
struct HodgeData {
  SigmaResult sigma;
  KohnDecomposition dec;
};

HodgeData hodge_data(const StructureData& sd, int N) {
  HodgeData h;
  h.sigma = stage("sigma", [&] { return construct_sigma(sd); });
  h.dec = stage("kohn", [&] { return kohn_decompose({h.sigma.sigma.s1bar}, sd, N); });
  return h;
}

constexpr int kKohnDegree = 8;

// Galerkin entries multiply degree-N basis elements into the structure
// coefficients, so perturbed models are re-solved with working degree 20 + N.
ModelSpec spectral_model(const ModelSpec& spec, int N) {
  if (!is_perturbed(spec)) return spec;
  ModelSpec out = spec;
  out.work_degree = std::min(kMaxDegree, std::max(spec.work_degree, kDefaultWorkDegree + N));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

void RunConfig::validate() const {
  if (N < 0 || N > kMaxBasisDegree) throw ConfigError("N must lie in [0, " + std::to_string(kMaxBasisDegree) + "]");
  if (!(eps > 0.0 && eps <= 0.25)) throw ConfigError("eps must lie in (0, 0.25]");
  if (J < 1) throw ConfigError("J must be positive");
  if (!g.is_real(1e-14)) throw ConfigError("exponent g must be real");
  if (!f.is_real(1e-14)) throw ConfigError("f must be real");
}

Field parse_exponent(const std::string& text) {
  static const std::map<std::string, std::function<Field()>> named = {
      {"zero", [] { return Field(); }},
      {"re_zwbar", [] { return product(Field::z(), Field::wbar()).real_part(); }},
      {"im_zwbar", [] { return product(Field::z(), Field::wbar()).imag_part(); }},
      {"re_zw", [] { return product(Field::z(), Field::w()).real_part(); }},
      {"im_zw", [] { return product(Field::z(), Field::w()).imag_part(); }},
      {"re_z", [] { return Field::z().real_part(); }},
      {"re_w", [] { return Field::w().real_part(); }},
      {"zzbar", [] { return product(Field::z(), Field::zbar()); }},
  };
  if (auto it = named.find(text); it != named.end()) return it->second();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("unknown exponent '" + text + "'");
  }
  return exponent_from_json(j);
}

Field exponent_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_exponent(j.get<std::string>());
  try {
    if (j.is_object()) return field_from_json(j);
    if (j.is_array()) {
      Field out;
      for (const auto& t : j) {
        if (t.size() < 5 || t.size() > 6) throw ConfigError("coefficient entries are [a, b, c, d, re] or [a, b, c, d, re, im]");
        const Monomial m{t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>(), t.at(3).get<int>()};
        if (m.a < 0 || m.b < 0 || m.c < 0 || m.d < 0 || m.degree() > kMaxBasisDegree)
          throw ConfigError("coefficient list exponent out of range");
        out += Field::monomial(m, Complex(t.at(4).get<double>(), t.size() == 6 ? t.at(5).get<double>() : 0.0));
      }
      return out;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("exponent: ") + e.what());
  }
  throw ConfigError("exponent must be a name, a coefficient list or a field object");
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig cfg;
  try {
    cfg.N = j.value("N", cfg.N);
    cfg.J = j.value("J", cfg.J);
    cfg.eps = j.value("eps", cfg.eps);
    cfg.out = j.value("out", cfg.out);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("g")) cfg.g = exponent_from_json(j.at("g"));
    if (j.contains("f")) cfg.f = exponent_from_json(j.at("f"));
    if (j.contains("model")) {
      nlohmann::json m = j.at("model");
      if (m.value("kind", "") == "perturbed") {
        if (!m.contains("g")) m["g"] = to_json(cfg.g.is_zero() ? parse_exponent("re_zwbar") : cfg.g);
        else if (m.at("g").is_string() || m.at("g").is_array()) m["g"] = to_json(exponent_from_json(m.at("g")));
        if (!m.contains("eps")) m["eps"] = cfg.eps;
        if (!m.contains("J")) m["J"] = cfg.J;
      }
      cfg.model = model_from_json(m);
    }
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      auto set = [&](const char* key, double& v) { v = t.value(key, v); };
      set("structure", cfg.tol.structure);
      set("structure_perturbed", cfg.tol.structure_perturbed);
      set("commutation", cfg.tol.commutation);
      set("transform", cfg.tol.transform);
      set("bochner", cfg.tol.bochner);
      set("bochner_intermediate", cfg.tol.bochner_intermediate);
      set("spectral", cfg.tol.spectral);
      set("nonnegative", cfg.tol.nonnegative);
      set("pipeline_eq0", cfg.tol.pipeline_eq0);
      set("pipeline_w1", cfg.tol.pipeline_w1);
      set("sasakian_gamma", cfg.tol.sasakian_gamma);
      set("convexity", cfg.tol.convexity);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

void apply_model_options(RunConfig& cfg, const ModelOptions& opt) {
  auto simple = [&](const std::string& kind) -> ModelSpec {
    if (kind == "sphere") return ModelSpec::sphere();
    if (kind == "left_invariant") return ModelSpec::left_invariant(opt.a.value_or(1.0));
    throw ConfigError("unknown model '" + kind + "'");
  };
  if (opt.kind) {
    if (*opt.kind == "perturbed") {
      const Field g = cfg.g.is_zero() ? parse_exponent("re_zwbar") : cfg.g;
      cfg.model = ModelSpec::perturbed(simple(opt.base.value_or("sphere")), g, cfg.eps, cfg.J);
    } else {
      cfg.model = simple(*opt.kind);
    }
  } else if (opt.a && cfg.model.kind == ModelSpec::Kind::LeftInvariant) {
    cfg.model = ModelSpec::left_invariant(*opt.a);
  }
  cfg.validate();
}

// ---------------------------------------------------------------------------
// structure

Report cmd_structure(const RunConfig& cfg) {
  Report rep("structure");
  rep.data()["model"] = model_json(cfg);
  const StructureData sd = stage("structure", [&] { return solve(cfg.model); });
  const double tol = model_tol(cfg, cfg.tol.structure, cfg.tol.structure_perturbed);
  const auto& r = sd.residuals;
  rep.add("admissibility d theta = i theta1 ^ theta1bar", "appendix structure equations", r.admissibility, tol);
  rep.add("structure equation d theta1 = theta1 ^ omega + theta ^ tau1", "appendix structure equations",
          r.structure_equation, tol);
  rep.add("omega + conj(omega) = 0", "appendix structure equations", r.omega_skew, tol);
  rep.add("Reeb field", "appendix structure equations", r.reeb, tol);
  rep.add("tau1 ^ theta1 = 0", "appendix structure equations", r.torsion_wedge, tol);
  rep.add("R real", "appendix structure equations", r.r_imaginary, tol);
  rep.add("d omega(Z1, T) = A11,1bar", "appendix structure equations", r.eq_b, tol);
  rep.add("R from an independent exterior derivative", "appendix structure equations", r.r_independent, tol);
  const QCurvature q = q_curvature(sd);
  rep.add("Q from both expressions", "eq c", q.formula_gap, tol);
  rep.add("d(omega + i R theta) = i(W1 theta1 + conj) ^ theta", "Lemma l1", check_lemma_l1(sd), tol);

  const double R0 = sd.R.coefficient({0, 0, 0, 0}).real();
  const double r_dev = sup_norm(sd.R - Field::constant(R0));
  const double a11 = sup_norm(sd.A11);
  if (!is_perturbed(cfg.model)) {
    rep.add("R constant", "appendix structure equations", r_dev, cfg.tol.structure);
    const Complex a0 = sd.A11.coefficient({0, 0, 0, 0});
    rep.add("A11 constant", "appendix structure equations", sup_norm(sd.A11 - Field::constant(a0)), cfg.tol.structure);
    if (standard_cr(cfg.model)) rep.add("A11 = 0 (Sasakian)", "Corollary c2", a11, 1e-10);
  }
  rep.stamp();

  auto& d = rep.data();
  d["R_mean"] = R0;
  d["R_deviation"] = r_dev;
  d["A11_sup"] = a11;
  d["W1_sup"] = sup_norm(w1(sd).value);
  d["Q_sup"] = sup_norm(q.Q);
  d["Q11_sup"] = sup_norm(cartan_tensor(sd).value);
  d["reeb"] = {{"theta", sd.reeb.theta_residual},
               {"contract", sd.reeb.contract_residual},
               {"pointwise", sd.reeb.pointwise_residual}};
  d["structure"] = to_json(sd);
  return rep;
}

// ---------------------------------------------------------------------------
// verify suites

namespace {

void suite_identities(const RunConfig& cfg, Report& rep) {
  const StructureData sd = stage("structure", [&] { return solve(cfg.model); });
  const HodgeData h = hodge_data(sd, kKohnDegree);
  const double tol = model_tol(cfg, cfg.tol.structure, cfg.tol.structure_perturbed);
  const SigmaResiduals vs = verify_sigma(h.sigma.sigma, sd);
  rep.add("d sigma = d omega", "eq 1", h.sigma.residual, tol);
  rep.add("R = s1bar,1 + s1,1bar - s0", "eq 1", vs.curvature, tol);
  rep.add("A11,1bar = s1,0 + i s0,1 - A11 s1bar", "eq 1", vs.torsion, tol);
  rep.add("eta = dbar_b phi + gamma", "Lemma l3", h.dec.residual, tol);
  rep.add("gamma_1bar,1 = 0", "Lemma l3", h.dec.harmonic_residual, cfg.tol.pipeline_eq0);
  rep.add("<dbar_b phi, gamma> = 0", "Lemma l3", h.dec.orthogonality, cfg.tol.pipeline_eq0);
  rep.add("W1 = 2 P1 u + i(A11 gamma_1bar - gamma_1,0)", "eq 0", check_w1_identity(sd, h.dec), cfg.tol.pipeline_eq0);
  rep.add("P1 f = i(A11 gamma_1bar - gamma_1,0)", "eq 7", eq7_residual(sd, h.dec, cfg.f), cfg.tol.pipeline_eq0);
  rep.add("P0 f = 2i[(A11 gamma_1bar),1bar - conj]", "eq 24", check_eq24(sd, h.dec, cfg.f), cfg.tol.pipeline_eq0);
  const Field probe = cfg.f + parse_exponent("re_zwbar");
  rep.add_info("P1 ordering f,1bar11 versus f,11bar1", "Theorem t1",
               sup_norm(p1(probe, sd).value - p1_alternative(probe, sd).value),
               "commutator discrepancy of the alternative ordering, f = cfg.f + Re(z wbar)");
  rep.add("Q from both expressions", "eq c", q_curvature(sd).formula_gap, tol);
  rep.add("d(omega + i R theta) = i(W1 theta1 + conj) ^ theta", "Lemma l1", check_lemma_l1(sd), tol);
  const int n = std::min(cfg.N, 6);
  const StructureData sdn = stage("structure", [&] { return solve(spectral_model(cfg.model, n)); });
  const OperatorMatrix m = assemble(sdn, n);
  rep.add("int <P phi + Pbar phi, d_b phi> = -int (P0 phi) phi, entrywise", "eq 10", m.eq10_residual,
          cfg.tol.spectral);
  rep.add("P0 self-adjoint, entrywise", "eq 10", m.asymmetry, cfg.tol.spectral);
  rep.stamp();
  rep.data()["kohn"] = to_json(h.dec);
}

void suite_commutation(const RunConfig& cfg, Report& rep) {
  const StructureData sd = stage("structure", [&] { return solve(cfg.model); });
  const double tol = model_tol(cfg, cfg.tol.commutation, 1e-6);
  constexpr int kFields = 20;
  for (int k : {0, 1, -1}) {
    CommutationResiduals worst;
    for (int i = 0; i < kFields; ++i) {
      const Field x = random_field(4, cfg.seed + 1000 * (k + 1) + i);
      const CommutationResiduals c = check_commutation({x, k}, sd);
      worst.zero_one = std::max(worst.zero_one, c.zero_one);
      worst.zero_onebar = std::max(worst.zero_onebar, c.zero_onebar);
      worst.one_onebar = std::max(worst.one_onebar, c.one_onebar);
      worst.zero_onebar_minus_k = std::max(worst.zero_onebar_minus_k, c.zero_onebar_minus_k);
    }
    const std::string tag = " (20 random fields, k = " + std::to_string(k) + ")";
    rep.add("C,01 - C,10 = A11 C,1bar - k C A11,1bar" + tag, "eq 6", worst.zero_one, tol);
    rep.add("C,01bar - C,1bar0 = A1bar1bar C,1 + k C A1bar1bar,1" + tag, "eq 6", worst.zero_onebar, tol);
    rep.add("C,11bar - C,1bar1 = i C,0 + k R C" + tag, "eq 6", worst.one_onebar, tol);
    if (k != 0)
      rep.add_info("second relation with -k" + tag, "eq 6", worst.zero_onebar_minus_k,
                   "sign measured; the +k row is the checked form");
  }
  const CommutationResiduals a = check_commutation({sd.A11, 2}, sd);
  rep.add("C,01 - C,10 relation on A11 (k = 2)", "Corollary c5", a.zero_one, tol);
  rep.add("C,01bar - C,1bar0 relation on A11 (k = 2)", "Corollary c5", a.zero_onebar, tol);
  rep.add("C,11bar - C,1bar1 relation on A11 (k = 2)", "Corollary c5", a.one_onebar, tol);
  rep.add_info("second relation with -k, A11", "Corollary c5", a.zero_onebar_minus_k,
               "sign measured; the +k row is the checked form");
  rep.stamp();
}

void suite_transforms(const RunConfig& cfg, Report& rep) {
  const ModelSpec tilde_spec =
      is_perturbed(cfg.model)
          ? cfg.model
          : ModelSpec::perturbed(cfg.model, cfg.g.is_zero() ? parse_exponent("re_zwbar") : cfg.g, cfg.eps, cfg.J);
  const StructureData base = stage("base structure", [&] { return solve(*tilde_spec.base); });
  const StructureData tilde = stage("rescaled structure", [&] { return solve(tilde_spec); });
  const Field f = cfg.f.is_zero() ? random_field(3, cfg.seed, true) : cfg.f;
  for (const auto& t : check_transformations(base, tilde, tilde_spec.lambda(), f, tilde_spec.J)) {
    Check& c = rep.add(t.name, t.anchor, t.residual, cfg.tol.transform);
    if (t.name == "Q law, coefficient 3/4") c.note = "fails; the coefficient 3 row holds";
  }
  rep.stamp();
  rep.data()["tilde_model"] = to_json(tilde_spec);
}

void add_bochner_rows(const BochnerReport& b, Report& rep, double main_tol, double inter_tol,
                      const std::vector<std::string>& main) {
  for (const auto& r : b.rows) {
    const bool is_main = std::find(main.begin(), main.end(), r.anchor) != main.end();
    const double tol = r.anchor == "u_perp" ? 1e-8 : (is_main ? main_tol : inter_tol);
    rep.add(r.name, r.anchor, r.residual, tol);
  }
}

void suite_bochner(const RunConfig& cfg, Report& rep) {
  const int n = std::min(cfg.N, 8);
  const StructureData sd = stage("structure", [&] { return solve(spectral_model(cfg.model, n)); });
  const HodgeData h = hodge_data(sd, kKohnDegree);
  const double main_tol = model_tol(cfg, cfg.tol.bochner_intermediate, cfg.tol.bochner);
  const double inter_tol = cfg.tol.bochner_intermediate;

  try {
    const BochnerReport b = check_bochner_26A(sd, cfg.f, h.dec, inter_tol);
    add_bochner_rows(b, rep, main_tol, inter_tol, {"26A"});
    rep.data()["26A"] = to_json(b);
  } catch (const PreconditionViolated& e) {
    rep.add("P1 f = i(A11 gamma_1bar - gamma_1,0) precondition", "eq 7", eq7_residual(sd, h.dec, cfg.f), inter_tol)
        .note = e.what();
  }
  IdentityRow standalone = check_29A_first(sd, random_field(3, cfg.seed, true));
  rep.add(standalone.name + " (random f)", "29A", standalone.residual, inter_tol);

  const TorsionForms tf = torsion_forms(sd, h.dec.gamma);
  rep.add("Tor, Tor', (2R - Tor) real", "eq 33", tf.imaginary, 1e-12);

  const SpectralReport spec = stage("spectrum", [&] { return eigensolve(assemble(sd, n)); });
  const Split us = decompose_perp(h.dec.u(), sd, spec);
  const BochnerReport bb = check_bochner_2018BB(sd, h.dec, q_curvature(sd).Q, us.perp);
  add_bochner_rows(bb, rep, main_tol, inter_tol, {"2018BB"});
  rep.stamp();
  rep.data()["2018BB"] = to_json(bb);
  rep.data()["spectral_N"] = n;
}

void suite_convexity(const RunConfig& cfg, Report& rep) {
  const auto pts = random_convexity_points(100, cfg.seed);
  double closed_vs_grid = 0.0, closed_vs_form = 0.0;
  int mismatches = 0, degenerate = 0, convex = 0;
  for (const auto& p : pts) {
    const double cf = convexity_closed_form(p).value;
    closed_vs_grid = std::max(closed_vs_grid, std::abs(cf - convexity_sampled(p)));
    closed_vs_form = std::max(closed_vs_form, std::abs(cf - form_deficit_sampled(p)));
    const ConvexityVerdict v = is_convex(p);
    mismatches += v.convex != v.form_verdict;
    convex += v.convex;
    degenerate += std::abs(2.0 * p.C0 * p.A11.real() + p.C1 * p.A11_1bar.real()) < 1e-14;
  }
  rep.add("closed-form maximum versus grid search of f (100 points)", "41a", closed_vs_grid, cfg.tol.convexity);
  rep.add("closed-form maximum versus direct form evaluation (100 points)", "eq 33", closed_vs_form,
          cfg.tol.convexity);
  rep.add("pinching verdict versus form positivity, disagreements (100 points)", "Lemma l6", mismatches, 0.0);
  ConvexityPoint e{0.71, std::polar(0.4, 0.0), std::polar(0.3, 0.0), 0.5, 0.5};
  ConvexityVerdict v = is_convex(e);
  rep.add_condition("R = 0.71, |A11| = 0.4, |A11,1bar| = 0.3 is convex", "Lemma l6", v.convex && v.form_verdict,
                    v.worst_phase_max);
  e.R = 0.69;
  v = is_convex(e);
  rep.add_condition("R = 0.69, same torsion is not convex", "Lemma l6", !v.convex && !v.form_verdict,
                    v.worst_phase_max);

  const StructureData sd = stage("structure", [&] { return solve(cfg.model); });
  double slack = std::numeric_limits<double>::infinity();
  for (const auto& p : convexity_points(sd, 0.5, 0.5))
    slack = std::min(slack, p.R - 2.0 * (0.5 * std::abs(p.A11) + 0.5 * std::abs(p.A11_1bar)));
  rep.add_info("model pinching slack min(R - |A11| - |A11,1bar|)", "Lemma l6", slack,
               slack > 0 ? "model is (1/2, 1/2)-convex" : "model is not (1/2, 1/2)-convex");
  rep.stamp();
  rep.data()["convexity"] = {{"points", pts.size()}, {"degenerate", degenerate}, {"convex", convex}};
}

}  // namespace

Report cmd_verify(const RunConfig& cfg, const std::string& suite) {
  Report rep("verify " + suite);
  rep.data()["model"] = model_json(cfg);
  if (suite == "identities") suite_identities(cfg, rep);
  else if (suite == "commutation") suite_commutation(cfg, rep);
  else if (suite == "transforms") suite_transforms(cfg, rep);
  else if (suite == "bochner") suite_bochner(cfg, rep);
  else if (suite == "convexity") suite_convexity(cfg, rep);
  else throw ConfigError("unknown suite '" + suite + "'");
  return rep;
}

// ---------------------------------------------------------------------------
// spectrum

Report cmd_spectrum(const RunConfig& cfg) {
  Report rep("spectrum");
  rep.data()["model"] = model_json(cfg);
  const StructureData sd = stage("structure", [&] { return solve(spectral_model(cfg.model, cfg.N)); });
  const bool standard = standard_cr(cfg.model);
  const bool sphere_like = standard && !is_perturbed(cfg.model);
  const std::string non_standard = "structure is not CR equivalent to the standard sphere";

  const OperatorMatrix m = stage("assemble", [&] { return assemble(sd, cfg.N); });
  const SpectralReport r = stage("eigensolve", [&] { return eigensolve(m); });
  rep.add("P0 self-adjoint, entrywise", "eq 10", m.asymmetry, cfg.tol.spectral);
  rep.add("int <P phi + Pbar phi, d_b phi> = -int (P0 phi) phi, entrywise", "eq 10", m.eq10_residual,
          cfg.tol.spectral);
  rep.add("Rayleigh quotients match eigenvalues", "eq 41", r.rayleigh, 1e-7);

  const double neg = std::max(0.0, -r.eigenvalues.front());
  const double neg_tol = sphere_like ? 1e-9 : cfg.tol.nonnegative;
  if (standard) {
    rep.add("spectrum nonnegative", "Remark r1.3", neg, neg_tol);
    rep.add_condition("non-kernel eigenvalues positive (Lambda)", "Remark r1.3", r.Lambda > 0.0, r.Lambda);
  } else {
    rep.add_info("most negative eigenvalue", "Remark r1.3", neg, non_standard);
  }

  // P0 on the crph basis, exactly and through the kernel
  double annihilate = 0.0;
  for (const auto& c : crph_basis(cfg.N)) annihilate = std::max(annihilate, sup_norm(p0(c, sd)));
  const SubspaceComparison cmp = compare_with_crph(sd, r);
  const SubspaceComparison cmp1 = compare_with_p1_kernel(sd, m, r);
  if (standard) {
    rep.add("P0 annihilates Re/Im z^a w^b", "eq 2018C", annihilate, model_tol(cfg, 1e-9, 1e-6));
    rep.add_condition("kernel dimension equals crph dimension", "eq 2018C", r.kernel_dim == cmp.crph_dim,
                      static_cast<double>(r.kernel_dim));
    rep.add("principal angles, crph versus kernel (max sine)", "eq 2018C", cmp.max_sine, 1e-6);
  } else {
    rep.add_info("P0 on Re/Im z^a w^b", "eq 2018C", annihilate, non_standard);
    rep.add_info("principal angles, crph versus kernel (max sine)", "eq 2018C", cmp.max_sine, non_standard);
  }
  rep.add("ker P1 inside ker P0 (max sine)", "Remark r1.2", cmp1.max_sine, 1e-6);
  rep.add_condition("kernel dimension >= dim ker P1", "Remark r1.2", r.kernel_dim >= cmp1.crph_dim,
                    static_cast<double>(cmp1.crph_dim));

  auto count = [&](double thr) {
    return static_cast<std::size_t>(
        std::count_if(r.eigenvalues.begin(), r.eigenvalues.end(), [&](double mu) { return std::abs(mu) <= thr; }));
  };
  const bool stable = count(0.1 * r.threshold) == r.kernel_dim && count(10.0 * r.threshold) == r.kernel_dim;
  if (sphere_like)
    rep.add_condition("kernel dimension stable for thresholds x0.1 .. x10", "eq 41", stable,
                      static_cast<double>(r.kernel_dim));
  else
    rep.add_info("kernel dimension stable for thresholds x0.1 .. x10", "eq 41", stable ? 1.0 : 0.0);
  rep.stamp();

  // Lambda(N)
  std::vector<int> Ns;
  for (int n : {4, 6, 8})
    if (n < cfg.N) Ns.push_back(n);
  nlohmann::json table = nlohmann::json::array();
  std::vector<LambdaRow> rows = lambda_table(sd, Ns);
  rows.push_back({cfg.N, r.Lambda, r.kernel_dim});
  for (const auto& row : rows) table.push_back({{"N", row.N}, {"Lambda", row.Lambda}, {"kernel_dim", row.kernel_dim}});
  double increase = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) increase = std::max(increase, rows[i].Lambda - rows[i - 1].Lambda);
  rep.add_info("Lambda(N) largest increase between successive N", "eq 41", increase);
  auto lam = [&](int n) -> std::optional<double> {
    for (const auto& row : rows)
      if (row.N == n) return row.Lambda;
    return std::nullopt;
  };
  if (lam(6) && lam(8)) {
    const double drift = std::abs(*lam(8) - *lam(6)) / std::abs(*lam(6));
    if (sphere_like) rep.add("Lambda drift between N = 6 and N = 8", "eq 41", drift, 0.05);
    else rep.add_info("Lambda drift between N = 6 and N = 8", "eq 41", drift);
  }
  rep.stamp();

  // eigenvalue bound
  const HodgeData h = hodge_data(sd, kKohnDegree);
  const Field Q = q_curvature(sd).Q;
  try {
    const BoundCheck b = check_bound_2018H(sd, h.dec.u(), Q, r);
    rep.add_condition("Lambda^2 int u_perp^2 <= int Q_perp^2 (margin)", "eq 2018H", b.holds, b.margin);
    rep.add_condition("Cauchy-Schwarz step", "eq 2018H", b.cauchy_schwarz >= -1e-12, b.cauchy_schwarz);
    rep.add("int (P0 u) u = int (P0 u_perp) u_perp", "eq 2018H", b.self_adjoint, 1e-8);
    rep.add("int u_ker u_perp = 0", "eq 2018H", decompose_perp(h.dec.u(), sd, r).cross, 1e-10);
    rep.add_info("int Q_perp u_perp + int (P0 u_perp) u_perp", "eq 2018H", b.chain);
    rep.data()["bound"] = {{"lhs", b.lhs}, {"rhs", b.rhs}, {"margin", b.margin}, {"chain", b.chain}};
  } catch (const HypothesisUnmet& e) {
    rep.add_info("eigenvalue bound hypothesis", "eq 2018H", 0.0, e.what());
  }
  rep.stamp();

  auto& d = rep.data();
  d["spectrum"] = to_json(r);
  d["Lambda_table"] = table;
  d["crph_dim"] = cmp.crph_dim;
  d["p1_kernel_dim"] = cmp1.crph_dim;
  d["basis_dim"] = m.dim();
  d["gram_min_eigenvalue"] = m.g_min_eigenvalue;
  return rep;
}

// ---------------------------------------------------------------------------
// pipeline

Report cmd_pipeline(const RunConfig& cfg) {
  Report rep("pipeline");
  rep.data()["model"] = model_json(cfg);
  const StructureData sd = stage("structure", [&] { return solve(cfg.model); });
  const double tol = model_tol(cfg, cfg.tol.structure, cfg.tol.structure_perturbed);
  const HodgeData h = hodge_data(sd, kKohnDegree);
  const SigmaResiduals vs = verify_sigma(h.sigma.sigma, sd);
  rep.add("d sigma = d omega", "eq 1", h.sigma.residual, tol);
  rep.add("R = s1bar,1 + s1,1bar - s0", "eq 1", vs.curvature, tol);
  rep.add("A11,1bar = s1,0 + i s0,1 - A11 s1bar", "eq 1", vs.torsion, tol);
  rep.add("eta = dbar_b phi + gamma", "Lemma l3", h.dec.residual, tol);
  rep.add("gamma_1bar,1 = 0", "Lemma l3", h.dec.harmonic_residual, cfg.tol.pipeline_eq0);
  rep.add("<dbar_b phi, gamma> = 0", "Lemma l3", h.dec.orthogonality, cfg.tol.pipeline_eq0);
  rep.stamp();
  const double eq0 = stage("eq0", [&] { return check_w1_identity(sd, h.dec); });
  rep.add("W1 = 2 P1 u + i(A11 gamma_1bar - gamma_1,0)", "eq 0", eq0, cfg.tol.pipeline_eq0);
  rep.add("P1 f = i(A11 gamma_1bar - gamma_1,0)", "eq 7", eq7_residual(sd, h.dec, cfg.f), cfg.tol.pipeline_eq0);
  rep.stamp();
  const PseudoEinsteinCandidate pe = stage("pe_candidate", [&] { return pe_candidate(sd, h.dec, cfg.f, cfg.J); });
  rep.add("theta~ = e^{(f + 2u)/3} theta is pseudo-Einstein, sup |W1~|", "Theorem t1", pe.w1_norm,
          cfg.tol.pipeline_w1);
  rep.stamp();
  try {
    const TorsionFreeGamma t = check_torsion_free_gamma(sd, h.dec);
    rep.add("gamma_1,0 = 0 on torsion-free structures", "Corollary c2", t.gamma_1_0, cfg.tol.sasakian_gamma);
    rep.add("R,1 = 2 u_1bar11 - i gamma_1,0", "eq 8", t.eq8, cfg.tol.pipeline_eq0);
  } catch (const NotSasakian&) {
    rep.add_info("torsion-free checks", "Corollary c2", sup_norm(sd.A11), "structure has torsion");
  }
  rep.stamp();

  auto& d = rep.data();
  d["kohn"] = to_json(h.dec);
  d["u"] = to_json(h.dec.u());
  d["gamma_norm"] = h.dec.gamma_norm;
  d["W1_tilde_sup"] = pe.w1_norm;
  return rep;
}

void write_outputs(const RunConfig& cfg, const Report& report) {
  if (cfg.out.empty()) return;
  namespace fs = std::filesystem;
  const fs::path dir(cfg.out);
  fs::create_directories(dir);
  std::ofstream(dir / "report.json") << report.to_json().dump(2) << '\n';
  std::ofstream(dir / "report.csv") << report.to_csv();
  if (report.data().contains("spectrum")) {
    SpectralReport r;
    r.eigenvalues = report.data()["spectrum"]["eigenvalues"].get<std::vector<double>>();
    std::ofstream(dir / "spectrum.csv") << spectrum_csv(r);
  }
}

}  // namespace crlab
