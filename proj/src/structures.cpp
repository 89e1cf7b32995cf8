#include "crlab/structures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "crlab/errors.hpp"
#include "crlab/operators.hpp"

namespace crlab {

namespace {

constexpr Complex kI{0.0, 1.0};

Field mul(const Field& x, const Field& y, int degree) { return multiply_truncated(x, y, degree); }

// Phi^s for Phi = exp-series(h); exact for constant h.
Field phi_power(const Field& h, double s, int J, int degree) {
  if (h.degree() == 0) return Field::constant(std::exp(s * h.coefficient({0, 0, 0, 0}).real()));
  return exp_series(h * s, J, degree);
}

// Coefficients below this are rounding residue of exp-series compositions.
constexpr double kPruneTol = 1e-15;

template <class Form>
Form pruned(Form x) {
  for (auto& f : x.c) f = f.pruned(kPruneTol);
  return x;
}

Complex eval_vector_component(const VectorField& v, int i, const Point& p) { return v.c[i].evaluate(p); }

}  // namespace

// ---------------------------------------------------------------------------
// Models

ModelSpec ModelSpec::sphere() { return {}; }

ModelSpec ModelSpec::left_invariant(double a) {
  if (!(a > 0.0)) throw ConfigError("left_invariant parameter must be positive");
  ModelSpec m;
  m.kind = Kind::LeftInvariant;
  m.a = a;
  return m;
}

ModelSpec ModelSpec::perturbed(const ModelSpec& base, const Field& g, double eps, int J, int work_degree) {
  if (!g.is_real(1e-14)) throw ConfigError("conformal exponent must be real");
  if (J < 1 || work_degree < 2 || work_degree > kMaxDegree) throw ConfigError("bad series order or work degree");
  ModelSpec m;
  m.kind = Kind::ConformalPerturb;
  m.base = std::make_shared<const ModelSpec>(base);
  m.g = g;
  m.eps = eps;
  m.J = J;
  m.work_degree = work_degree;
  return m;
}

Field ModelSpec::lambda() const { return kind == Kind::ConformalPerturb ? g * eps : Field(); }

std::string ModelSpec::name() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::StandardSphere:
      out << "sphere";
      break;
    case Kind::LeftInvariant:
      out << "left_invariant(a=" << a << ")";
      break;
    case Kind::ConformalPerturb:
      out << "perturbed(eps=" << eps << ", base=" << base->name() << ")";
      break;
  }
  return out.str();
}

nlohmann::json to_json(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelSpec::Kind::StandardSphere:
      return {{"kind", "sphere"}};
    case ModelSpec::Kind::LeftInvariant:
      return {{"kind", "left_invariant"}, {"a", spec.a}};
    case ModelSpec::Kind::ConformalPerturb:
      return {{"kind", "perturbed"},     {"eps", spec.eps}, {"J", spec.J}, {"work_degree", spec.work_degree},
              {"g", to_json(spec.g)},    {"base", to_json(*spec.base)}};
  }
  return {};
}

ModelSpec model_from_json(const nlohmann::json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "sphere") return ModelSpec::sphere();
    if (kind == "left_invariant") return ModelSpec::left_invariant(j.at("a").get<double>());
    if (kind == "perturbed") {
      const auto base = j.contains("base") ? model_from_json(j.at("base")) : ModelSpec::sphere();
      return ModelSpec::perturbed(base, field_from_json(j.at("g")), j.value("eps", 0.1), j.value("J", 12),
                                  j.value("work_degree", kDefaultWorkDegree));
    }
    throw ConfigError("unknown model kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("model spec: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Coframes

Coframe standard_coframe() {
  Coframe cf;
  cf.theta = basis_form(0);
  cf.theta1 = basis_form(1);
  cf.T = basis_vector(0);
  cf.Z = basis_vector(1);
  return cf;
}

Coframe left_invariant_coframe(double a) {
  if (!(a > 0.0)) throw ConfigError("left_invariant parameter must be positive");
  const double p = 0.5 * (a + 1.0 / a);
  const double q = 0.5 * (a - 1.0 / a);
  Coframe cf;
  cf.theta = basis_form(0);
  cf.theta1 = basis_form(1) * p - basis_form(2) * q;
  cf.T = basis_vector(0);
  cf.Z.c[1] = Field::constant(p);
  cf.Z.c[2] = Field::constant(q);
  return cf;
}

Coframe conformal_rescale(const Coframe& cf, const Field& h, int J, int degree) {
  const int D = std::min(cf.degree, degree);
  const Field phi = phi_power(h, 1.0, J, D);
  for (const auto& p : default_samples()) {
    const Complex v = phi.evaluate(p);
    if (!(v.real() > 0.0)) throw NotPositive("conformal factor is not positive at a sample point");
  }
  const Field half = phi_power(h, 0.5, J, D);
  const Field inv = phi_power(h, -1.0, J, D);
  const Field inv_half = phi_power(h, -0.5, J, D);
  const Field c = kI * apply(cf.Zbar(), h, D);

  Coframe out;
  out.degree = D;
  out.theta = pruned(scale(phi, cf.theta, D));
  out.theta1 = pruned(scale(half, cf.theta1 + scale(c, cf.theta, D), D));
  const VectorField shifted = cf.T - scale(c, cf.Z, D) - scale(c.conj(), cf.Zbar(), D);
  out.T = pruned(scale(inv, shifted, D));
  out.Z = pruned(scale(inv_half, cf.Z, D));
  return out;
}

Coframe build_coframe(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelSpec::Kind::StandardSphere:
      return standard_coframe();
    case ModelSpec::Kind::LeftInvariant:
      return left_invariant_coframe(spec.a);
    case ModelSpec::Kind::ConformalPerturb: {
      Coframe base = build_coframe(*spec.base);
      base.degree = std::min(base.degree, spec.work_degree);
      return conformal_rescale(base, spec.lambda() * 2.0, spec.J, spec.work_degree);
    }
  }
  throw ConfigError("unknown model kind");
}

double admissibility_residual(const Coframe& cf) {
  const TwoForm lhs = d(cf.theta);
  const TwoForm rhs = wedge(cf.theta1, cf.theta1bar(), cf.degree) * kI;
  return sup_norm(lhs - rhs);
}

double theta_reality_residual(const Coframe& cf) { return sup_norm(cf.theta - cf.theta.conj()); }

double min_contact_volume(const Coframe& cf) {
  const Field vol = wedge(cf.theta, d(cf.theta), cf.degree);
  double m = INFINITY;
  for (const auto& p : default_samples()) m = std::min(m, std::abs(vol.evaluate(p)));
  return m;
}

ReebResult reeb(const Coframe& cf) {
  const int D = cf.degree;
  const TwoForm dtheta = d(cf.theta);
  ReebResult r;
  r.T = cf.T;
  r.theta_residual = sup_norm(pair(cf.theta, cf.T, D) - Field::constant(1.0));
  r.contract_residual = sup_norm(contract(cf.T, dtheta, D));

  // Independent pointwise solve of theta(T) = 1, d theta(T, .) = 0.
  for (const auto& p : default_samples()) {
    Complex th[3], b[3];
    for (int i = 0; i < 3; ++i) {
      th[i] = cf.theta.c[i].evaluate(p);
      b[i] = dtheta.c[i].evaluate(p);
    }
    Eigen::Matrix<Complex, 4, 3> M;
    M << th[0], th[1], th[2],
         Complex(0.0), -b[0], -b[1],
         b[0], Complex(0.0), -b[2],
         b[1], b[2], Complex(0.0);
    Eigen::Matrix<Complex, 4, 1> rhs;
    rhs << 1.0, 0.0, 0.0, 0.0;
    Eigen::ColPivHouseholderQR<Eigen::Matrix<Complex, 4, 3>> qr(M);
    qr.setThreshold(1e-10);
    if (qr.rank() < 3) throw Singular("Reeb system degenerates at a sample point");
    const Eigen::Matrix<Complex, 3, 1> t = qr.solve(rhs);
    for (int i = 0; i < 3; ++i)
      r.pointwise_residual = std::max(r.pointwise_residual, std::abs(t(i) - eval_vector_component(cf.T, i, p)));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Structure equations

StructureData solve_structure(const Coframe& cf, double admissibility_tol) {
  const int D = cf.degree;
  StructureData sd;
  sd.cf = cf;
  sd.residuals.admissibility = admissibility_residual(cf);
  if (!(sd.residuals.admissibility <= admissibility_tol)) {
    std::ostringstream msg;
    msg << "coframe is not admissible (residual " << sd.residuals.admissibility << ")";
    throw NonAdmissible(msg.str());
  }
  const VectorField& T = cf.T;
  const VectorField& Z = cf.Z;
  const VectorField Zb = cf.Zbar();
  const OneForm theta1bar = cf.theta1bar();

  const TwoForm dth1 = d(cf.theta1);
  Field omega0 = -pair(dth1, T, Z, D).pruned(kPruneTol);
  sd.omega1bar = pair(dth1, Z, Zb, D).pruned(kPruneTol);
  sd.A11bar = pair(dth1, T, Zb, D).pruned(kPruneTol);
  sd.omega1 = -sd.omega1bar.conj();
  sd.A11 = sd.A11bar.conj();
  sd.residuals.omega_skew = sup_norm(omega0.real_part());
  sd.omega0 = kI * omega0.imag_part();

  sd.omega = scale(sd.omega0, cf.theta, D) + scale(sd.omega1, cf.theta1, D) + scale(sd.omega1bar, theta1bar, D);
  const OneForm tau1 = scale(sd.A11bar, theta1bar, D);
  sd.residuals.structure_equation = sup_norm(dth1 - wedge(cf.theta1, sd.omega, D) - wedge(cf.theta, tau1, D));
  sd.residuals.omega_skew = std::max(sd.residuals.omega_skew, sup_norm(sd.omega + sd.omega.conj()));
  sd.residuals.torsion_wedge = sup_norm(wedge(scale(sd.A11, cf.theta1, D), cf.theta1, D));

  const TwoForm domega = d(sd.omega);
  const Field R = pair(domega, Z, Zb, D);
  sd.residuals.r_imaginary = sup_norm(R.imag_part());
  sd.R = R.real_part().pruned(kPruneTol);

  // Cartan formula for d omega(Z, Zbar), independent of the basis routine d().
  const Field r_indep = apply(Z, sd.omega1bar, D) - apply(Zb, sd.omega1, D) - pair(sd.omega, bracket(Z, Zb, D), D);
  sd.residuals.r_independent = sup_norm(r_indep - R);

  sd.rho = wedge(cf.theta, d(cf.theta), D) * Complex(0.0, -1.0);
  sd.rho = sd.rho.real_part().pruned(kPruneTol);

  sd.reeb = reeb(cf);
  sd.residuals.reeb =
      std::max({sd.reeb.theta_residual, sd.reeb.contract_residual, sd.reeb.pointwise_residual});

  const Field a11_1bar = cov_derive({sd.A11, 2}, Direction::Z1bar, sd).value;
  sd.residuals.eq_b = sup_norm(pair(domega, Z, T, D) - a11_1bar);
  return sd;
}

WeightedTensor w1(const StructureData& sd) {
  const auto r1 = cov_derive({sd.R, 0}, Direction::Z1, sd);
  const auto a1b = cov_derive({sd.A11, 2}, Direction::Z1bar, sd);
  return {r1.value - kI * a1b.value, 1};
}

QCurvature q_curvature(const StructureData& sd) {
  const WeightedTensor R{sd.R, 0};
  const WeightedTensor A{sd.A11, 2};
  const WeightedTensor Ab{sd.A11bar, -2};
  const Field r11b = cov_derive(R, {Direction::Z1, Direction::Z1bar}, sd).value;
  const Field a1b1b = cov_derive(A, {Direction::Z1bar, Direction::Z1bar}, sd).value;
  const Field ab11 = cov_derive(Ab, {Direction::Z1, Direction::Z1}, sd).value;
  QCurvature q;
  q.Q = -(r11b - kI * a1b1b).real_part();
  const Field second = (sublaplacian(sd.R, sd) - kI * (a1b1b - ab11)) * -0.5;
  q.formula_gap = sup_norm(second - q.Q);
  return q;
}

WeightedTensor cartan_tensor(const StructureData& sd) {
  const int D = sd.degree();
  const WeightedTensor R{sd.R, 0};
  const WeightedTensor A{sd.A11, 2};
  const Field r11 = cov_derive(R, {Direction::Z1, Direction::Z1}, sd).value;
  const Field a0 = cov_derive(A, Direction::T, sd).value;
  const Field a1b1 = cov_derive(A, {Direction::Z1bar, Direction::Z1}, sd).value;
  Field q = r11 * (1.0 / 6.0) + mul(sd.R, sd.A11, D) * (kI * 0.5) - a0 - a1b1 * (kI * (2.0 / 3.0));
  return {q, 2};
}

double check_lemma_l1(const StructureData& sd) {
  const int D = sd.degree();
  const TwoForm lhs = d(sd.omega + scale(sd.R * kI, sd.cf.theta, D));
  const Field W = w1(sd).value;
  const OneForm wform = scale(W, sd.cf.theta1, D) + scale(W.conj(), sd.cf.theta1bar(), D);
  const TwoForm rhs = wedge(wform, sd.cf.theta, D) * kI;
  return sup_norm(lhs - rhs);
}

nlohmann::json to_json(const StructureData& sd) {
  const auto& r = sd.residuals;
  return {
      {"degree", sd.degree()},
      {"omega0", to_json(sd.omega0)},
      {"omega1bar", to_json(sd.omega1bar)},
      {"A11", to_json(sd.A11)},
      {"R", to_json(sd.R)},
      {"residuals",
       {{"admissibility", r.admissibility},
        {"structure_equation", r.structure_equation},
        {"omega_skew", r.omega_skew},
        {"reeb", r.reeb},
        {"r_imaginary", r.r_imaginary},
        {"torsion_wedge", r.torsion_wedge},
        {"eq_b", r.eq_b},
        {"r_independent", r.r_independent}}},
  };
}

}  // namespace crlab
