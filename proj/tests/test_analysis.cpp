#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "crlab/analysis.hpp"
#include "crlab/errors.hpp"

using namespace crlab;

namespace {

// Dense angle sweep s = tan(phi), phi in (-pi/2, pi/2), plus the |s| -> infinity limit.
double brute_sup_f(const ConvexityPoint& p) {
  const int n = 400000;
  double best = -2.0 * p.C0 * p.A11.imag();
  for (int i = 1; i < n; ++i) {
    const double phi = -std::numbers::pi / 2 + std::numbers::pi * i / n;
    best = std::max(best, convexity_f(p, std::tan(phi)));
  }
  return best;
}

const StructureData& perturbed() {
  static const StructureData sd = [] {
    const Field g = (multiply(Field::z(), Field::wbar()) + multiply(Field::zbar(), Field::w())) * 0.5;
    return solve_structure(build_coframe(ModelSpec::perturbed(ModelSpec::sphere(), g, 0.1)));
  }();
  return sd;
}

const KohnDecomposition& perturbed_kohn() {
  static const KohnDecomposition dec = kohn_decompose({construct_sigma(perturbed()).sigma.s1bar}, perturbed(), 8);
  return dec;
}

}  // namespace

TEST_CASE("form at x = 1 + si against f") {
  for (const auto& p : random_convexity_points(40, 5)) {
    for (double s : {-7.0, -1.0, 0.0, 0.3, 2.5}) {
      const Complex x{1.0, s};
      CHECK(convexity_form(p, x) == doctest::Approx((1 + s * s) * (p.R - convexity_f(p, s))).epsilon(1e-12));
    }
  }
}

TEST_CASE("closed-form maximum against a dense sweep") {
  for (const auto& p : random_convexity_points(60, 17)) {
    const ConvexityMax m = convexity_closed_form(p);
    CHECK(std::abs(m.value - brute_sup_f(p)) < 1e-6);
    CHECK(std::abs(m.value - convexity_sampled(p)) < 1e-6);
    CHECK(std::abs(m.value - form_deficit_sampled(p)) < 1e-6);
    if (m.attained) CHECK(convexity_f(p, m.s0) == doctest::Approx(m.value).epsilon(1e-12));
  }
}

TEST_CASE("degenerate branch") {
  // 2 C0 a + C1 c = 0
  ConvexityPoint p{1.0, Complex(0.2, 0.3), Complex(-0.4, 0.1), 0.5, 0.5};
  ConvexityMax m = convexity_closed_form(p);
  CHECK(m.attained);
  CHECK(m.s0 == doctest::Approx(0.0));
  CHECK(m.value == doctest::Approx(0.4));
  p.A11 = Complex(0.2, -0.3);
  p.A11_1bar = Complex(-0.4, -0.1);
  m = convexity_closed_form(p);
  CHECK_FALSE(m.attained);
  CHECK(m.value == doctest::Approx(0.3));
}

TEST_CASE("pinching agrees with the worst-phase form") {
  int disagreements = 0;
  for (const auto& p : random_convexity_points(200, 3)) {
    const ConvexityVerdict v = is_convex(p);
    disagreements += v.convex != v.form_verdict;
    CHECK(v.pinching_bound == doctest::Approx(2 * (p.C0 * std::abs(p.A11) + p.C1 * std::abs(p.A11_1bar))));
  }
  CHECK(disagreements == 0);
  const ConvexityPoint e{0.71, 0.4, 0.3, 0.5, 0.5};
  CHECK(is_convex(e).convex);
  CHECK_FALSE(is_convex({0.69, 0.4, 0.3, 0.5, 0.5}).convex);
}

TEST_CASE("torsion forms are real") {
  const TorsionForms t = torsion_forms(perturbed(), perturbed_kohn().gamma);
  CHECK(t.imaginary < 1e-12);
  CHECK(std::abs(t.tor_integral) > 0.0);
}

TEST_CASE("Bochner identities on the perturbed sphere") {
  const Field f;
  const BochnerReport b = check_bochner_26A(perturbed(), f, perturbed_kohn());
  for (const auto& r : b.rows) {
    CAPTURE(r.anchor);
    CHECK(r.residual < 1e-5);
  }
  CHECK(b.row("26A").residual < 1e-10);
  const IdentityRow first = check_29A_first(perturbed(), random_field(3, 4, true));
  CHECK(first.residual < 1e-6);
  CHECK(std::abs(first.lhs) > 1e-3);
}

TEST_CASE("26A precondition") {
  CHECK_THROWS_AS(check_bochner_26A(perturbed(), random_field(3, 6, true), perturbed_kohn()), PreconditionViolated);
}
