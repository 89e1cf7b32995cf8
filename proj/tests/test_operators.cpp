#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crlab/operators.hpp"

using namespace crlab;

namespace {

const StructureData& sphere() {
  static const StructureData sd = solve_structure(build_coframe(ModelSpec::sphere()));
  return sd;
}

const StructureData& li() {
  static const StructureData sd = solve_structure(build_coframe(ModelSpec::left_invariant(1.1)));
  return sd;
}

const StructureData& perturbed() {
  static const StructureData sd = [] {
    const Field g = (multiply(Field::z(), Field::wbar()) + multiply(Field::zbar(), Field::w())) * 0.5;
    return solve_structure(build_coframe(ModelSpec::perturbed(ModelSpec::sphere(), g, 0.1)));
  }();
  return sd;
}

Field mono(int a, int b, int c, int d) { return Field::monomial({a, b, c, d}); }

// ratio f(p) / g(p) at a sample where g is not small
Complex ratio(const Field& f, const Field& g) {
  for (const auto& p : default_samples()) {
    const Complex v = g.evaluate(p);
    if (std::abs(v) > 0.1) return f.evaluate(p) / v;
  }
  return {};
}

}  // namespace

TEST_CASE("sublaplacian on harmonic bidegrees") {
  // on H_{p,q} the eigenvalue is proportional to 2pq + p + q
  const Field fz = mono(1, 0, 0, 0);
  const Complex base = ratio(sublaplacian(fz, sphere()), fz);
  REQUIRE(std::abs(base) > 1e-6);
  struct Case {
    Field f;
    double weight;
  };
  for (const Case& c : {Case{mono(2, 0, 0, 0), 2.0}, Case{mono(1, 0, 0, 1), 4.0}, Case{mono(2, 0, 0, 1), 7.0},
                        Case{mono(0, 1, 1, 0), 4.0}}) {
    const Field lf = sublaplacian(c.f, sphere());
    const Complex mu = ratio(lf, c.f);
    CHECK(std::abs(mu - c.weight * base) < 1e-12);
    CHECK(sup_norm(lf - c.f * mu) < 1e-12);
  }
}

TEST_CASE("first covariant derivative of a function on the left-invariant model") {
  const double a = 1.1, p = 0.5 * (a + 1 / a), q = 0.5 * (a - 1 / a);
  const Field f = random_field(4, 5);
  const Field expected = frame_derive(f, Direction::Z1) * p + frame_derive(f, Direction::Z1bar) * q;
  CHECK(sup_norm(cov_derive({f, 0}, Direction::Z1, li()).value - expected) < 1e-13);
}

TEST_CASE("covariant T derivative of constant torsion") {
  // omega(T) = -2i(p^2 + q^2), k = 2: A11,0 = 4i(p^2 + q^2) A11
  const double a = 1.1, p = 0.5 * (a + 1 / a), q = 0.5 * (a - 1 / a);
  const WeightedTensor t = cov_derive({li().A11, 2}, Direction::T, li());
  CHECK(t.weight == 2);
  CHECK(sup_norm(t.value - li().A11 * Complex(0, 4 * (p * p + q * q))) < 1e-12);
  CHECK(sup_norm(cov_derive({li().A11, 2}, Direction::Z1bar, li()).value) < 1e-12);
}

TEST_CASE("commutation relations") {
  for (const StructureData* sd : {&sphere(), &li(), &perturbed()}) {
    for (int k : {0, 1, -1, 2}) {
      CAPTURE(k);
      const CommutationResiduals c = check_commutation({random_field(4, 40 + k), k}, *sd);
      CHECK(c.zero_one < 1e-7);
      CHECK(c.zero_onebar < 1e-7);
      CHECK(c.one_onebar < 1e-7);
    }
  }
  // the -k variant differs once A1bar1bar,1 is nonzero
  CHECK(check_commutation({random_field(4, 9), 1}, perturbed()).zero_onebar_minus_k > 1e-3);
}

TEST_CASE("P0 kills the pluriharmonic functions of the sphere") {
  for (const auto& [a, b] : {std::pair{1, 0}, {0, 1}, {2, 1}, {3, 0}, {1, 3}}) {
    const Field h = mono(a, b, 0, 0);
    CHECK(sup_norm(p1(h.real_part(), sphere()).value) < 1e-12);
    CHECK(sup_norm(p0(h.imag_part(), sphere())) < 1e-12);
  }
  CHECK(sup_norm(p0(mono(1, 0, 0, 1).real_part(), sphere())) > 1e-2);
}

TEST_CASE("P0 is real and self-adjoint on a perturbed sphere") {
  const Field f = random_field(3, 1, true);
  const Field g = random_field(3, 2, true);
  const Field pf = p0(f, perturbed());
  CHECK(pf.is_real(1e-10));
  const Complex lhs = integrate_sd(pf, g, perturbed());
  const Complex rhs = integrate_sd(f, p0(g, perturbed()), perturbed());
  CHECK(std::abs(lhs - rhs) < 1e-8 * std::max(1.0, std::abs(lhs)));
  CHECK(integrate_sd(pf, f, perturbed()).real() > -1e-8);
}

TEST_CASE("dbar_b and its adjoint") {
  const Field f = random_field(3, 3);
  const Field g = random_field(3, 4);
  const ZeroOneForm gamma{g};
  // <dbar_b f, gamma> = <f, dbar_b^* gamma> in L2(theta ^ d theta)
  const Complex lhs = inner_sd(dbar_b(f, perturbed()).g1bar, g, perturbed());
  const Complex rhs = inner_sd(f, dbar_star(gamma, perturbed()), perturbed());
  CHECK(std::abs(lhs - rhs) < 1e-9);
  const ZeroOneForm bx = box_b(gamma, perturbed());
  CHECK(sup_norm(bx.g1bar - dbar_b(dbar_star(gamma, perturbed()), perturbed()).g1bar * 2.0) < 1e-12);
}

TEST_CASE("transformation laws") {
  const StructureData& base = sphere();
  const Field lambda = (multiply(Field::z(), Field::wbar()) + multiply(Field::zbar(), Field::w())) * 0.05;
  const Field f = random_field(3, 8, true);
  for (const auto& t : check_transformations(base, perturbed(), lambda, f)) {
    CAPTURE(t.name);
    if (t.name == "Q law, coefficient 3/4")
      CHECK(t.residual > 1e-2);  // the 3/4 coefficient does not hold
    else
      CHECK(t.residual < 1e-5);
  }
}
