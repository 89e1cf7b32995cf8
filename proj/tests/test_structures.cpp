#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "crlab/errors.hpp"
#include "crlab/structures.hpp"

using namespace crlab;

namespace {

// Hand derivation for theta1 = p e1 - q e2, p^2 - q^2 = 1: omega = -2i(p^2 + q^2) theta,
// A1bar1bar = 4ipq, hence R = a^2 + a^-2 and A11 = -i(a^2 - a^-2).
double li_R(double a) { return a * a + 1.0 / (a * a); }
Complex li_A11(double a) { return Complex(0.0, -(a * a - 1.0 / (a * a))); }

double spread(const Field& f) {
  double lo = 1e300, hi = -1e300;
  for (const auto& p : default_samples()) {
    const double v = std::abs(f.evaluate(p));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

Field re_zwbar() { return (multiply(Field::z(), Field::wbar()) + multiply(Field::zbar(), Field::w())) * 0.5; }

}  // namespace

TEST_CASE("standard sphere") {
  const StructureData sd = solve_structure(build_coframe(ModelSpec::sphere()));
  CHECK(sup_norm(sd.A11) == doctest::Approx(0.0));
  CHECK(sup_norm(sd.R - Field::constant(2.0)) < 1e-13);
  CHECK(sd.residuals.admissibility < 1e-13);
  CHECK(sd.residuals.structure_equation < 1e-13);
  CHECK(sd.residuals.reeb < 1e-13);
  CHECK(sup_norm(sd.omega0 - Field::constant(Complex(0, -2))) < 1e-13);
  CHECK(sup_norm(w1(sd).value) < 1e-13);
  CHECK(std::abs(q_curvature(sd).Q.max_abs_coefficient()) < 1e-13);
}

TEST_CASE("left-invariant constants against the hand derivation") {
  for (double a : {0.9, 0.99, 1.01, 1.1, 1.3}) {
    CAPTURE(a);
    const StructureData sd = solve_structure(build_coframe(ModelSpec::left_invariant(a)));
    const Point p0 = default_samples().front();
    CHECK(std::abs(sd.R.evaluate(p0) - li_R(a)) < 1e-12);
    CHECK(std::abs(sd.A11.evaluate(p0) - li_A11(a)) < 1e-12);
    CHECK(spread(sd.R) < 1e-12);
    CHECK(spread(sd.A11) < 1e-12);
    CHECK(sd.residuals.structure_equation < 1e-10);
    CHECK(sd.residuals.r_independent < 1e-10);
    CHECK(q_curvature(sd).formula_gap < 1e-9);
  }
}

TEST_CASE("torsion vanishes monotonically as a -> 1") {
  auto mag = [](double a) {
    const StructureData sd = solve_structure(build_coframe(ModelSpec::left_invariant(a)));
    return std::abs(sd.A11.evaluate(default_samples().front()));
  };
  CHECK(mag(0.9) > mag(0.99));
  CHECK(mag(1.1) > mag(1.01));
  CHECK(mag(1.0) < 1e-15);
}

TEST_CASE("a = 1 degenerates to the sphere") {
  const StructureData s = solve_structure(build_coframe(ModelSpec::sphere()));
  const StructureData l = solve_structure(build_coframe(ModelSpec::left_invariant(1.0)));
  CHECK(sup_norm(s.R - l.R) < 1e-15);
  CHECK(sup_norm(cartan_tensor(l).value) < 1e-13);
}

TEST_CASE("conformal perturbation") {
  const ModelSpec spec = ModelSpec::perturbed(ModelSpec::sphere(), re_zwbar(), 0.1);
  const StructureData sd = solve_structure(build_coframe(spec));
  CHECK(sd.residuals.admissibility < 1e-9);
  CHECK(sd.residuals.structure_equation < 1e-9);
  CHECK(sd.residuals.omega_skew < 1e-9);
  CHECK(sd.residuals.r_imaginary < 1e-9);
  CHECK(sd.residuals.eq_b < 1e-7);
  CHECK(check_lemma_l1(sd) < 1e-7);
  CHECK(sup_norm(sd.A11) > 1e-3);
  CHECK(sd.R.is_real(1e-12));
  // rho = e^{4 lambda} for theta~ = e^{2 lambda} theta
  const Field lambda = spec.lambda();
  for (const auto& p : default_samples())
    CHECK(std::abs(sd.rho.evaluate(p) - std::exp(4.0 * lambda.evaluate(p))) < 1e-10);
}

TEST_CASE("model spec json round trip") {
  const ModelSpec spec = ModelSpec::perturbed(ModelSpec::left_invariant(1.2), re_zwbar(), 0.05, 10);
  const ModelSpec back = model_from_json(to_json(spec));
  CHECK(back.kind == ModelSpec::Kind::ConformalPerturb);
  CHECK(back.base->kind == ModelSpec::Kind::LeftInvariant);
  CHECK(back.base->a == doctest::Approx(1.2));
  CHECK(back.eps == doctest::Approx(0.05));
  CHECK(back.J == 10);
  CHECK(to_json(back) == to_json(spec));
}

TEST_CASE("invalid models") {
  CHECK_THROWS_AS(left_invariant_coframe(-1.0), ConfigError);
  const Field big = Field::constant(-1000.0);
  CHECK_THROWS_AS(conformal_rescale(standard_coframe(), big, 1, 20), NotPositive);
}
