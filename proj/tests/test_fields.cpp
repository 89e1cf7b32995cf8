#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "crlab/errors.hpp"
#include "crlab/fields.hpp"

using namespace crlab;

namespace {

Complex pointwise(const Point& p, int a, int b, int c, int d) {
  return std::pow(p.z, a) * std::pow(p.w, b) * std::pow(std::conj(p.z), c) * std::pow(std::conj(p.w), d);
}

// d/dt f(e^{it} z, e^{it} w) at t = 0 by central difference.
Complex hopf_derivative(const Field& f, const Point& p) {
  const double h = 1e-5;
  auto rotated = [&](double t) { return Point{p.z * std::exp(Complex(0, t)), p.w * std::exp(Complex(0, t))}; };
  return (f.evaluate(rotated(h)) - f.evaluate(rotated(-h))) / (2 * h);
}

}  // namespace

TEST_CASE("table dimensions") {
  const auto& t = MonomialTable::instance();
  CHECK(t.dim(0) == 1);
  CHECK(t.dim(8) == 285);
  CHECK(t.dim(12) == 819);
  for (int k = 0; k <= 10; ++k) CHECK(t.dim(k) - t.dim(k - 1) == static_cast<std::size_t>((k + 1) * (k + 1)));
}

TEST_CASE("reduction") {
  auto zzb = multiply(Field::z(), Field::zbar());
  auto expected = Field::constant(1.0) - multiply(Field::w(), Field::wbar());
  CHECK((zzb - expected).is_zero());

  auto lhs = multiply(Field::z() + Field::w(), Field::zbar() + Field::wbar());
  auto pts = random_points(20, 7);
  for (const auto& p : pts) {
    const Complex direct = (p.z + p.w) * (std::conj(p.z) + std::conj(p.w));
    CHECK(std::abs(lhs.evaluate(p) - direct) < 1e-12);
  }
  CHECK(std::abs(lhs.coefficient({0, 0, 0, 0}) - 1.0) < 1e-15);
  CHECK(std::abs(lhs.coefficient({1, 0, 0, 1}) - 1.0) < 1e-15);
  CHECK(std::abs(lhs.coefficient({0, 1, 1, 0}) - 1.0) < 1e-15);
}

TEST_CASE("reduction confluence on random monomials") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> e(0, 3);
  auto pts = random_points(5, 11);
  for (int trial = 0; trial < 100; ++trial) {
    const int a = e(rng), b = e(rng), c = e(rng), d = e(rng);
    // reduce all at once versus build up one factor at a time
    const auto direct = Field::monomial({a, b, c, d});
    Field built = Field::constant(1.0);
    for (int i = 0; i < c; ++i) built = multiply(built, Field::zbar());
    for (int i = 0; i < a; ++i) built = multiply(built, Field::z());
    for (int i = 0; i < d; ++i) built = multiply(built, Field::wbar());
    for (int i = 0; i < b; ++i) built = multiply(built, Field::w());
    CHECK((direct - built).max_abs_coefficient() < 1e-12);
    for (const auto& p : pts) CHECK(std::abs(direct.evaluate(p) - pointwise(p, a, b, c, d)) < 1e-12);
  }
}

TEST_CASE("cap exceeded") {
  auto f = Field::monomial({0, 5, 0, 0});
  CHECK_THROWS_AS(multiply(f, f, 8), CapExceeded);
  CHECK(multiply_truncated(f, f, 8).is_zero());
}

TEST_CASE("frame action") {
  CHECK(frame_derive(Field::constant(3.0), Direction::Z1).is_zero());
  CHECK(frame_derive(Field::z(), Direction::Z1bar).is_zero());
  CHECK(frame_derive(Field::w(), Direction::Z1bar).is_zero());
  CHECK((frame_derive(Field::z(), Direction::Z1) - Field::wbar()).is_zero());

  auto f = random_field(5, 1);
  auto g = random_field(4, 2);
  for (auto dir : {Direction::Z1, Direction::Z1bar, Direction::T}) {
    auto lhs = frame_derive(multiply(f, g), dir);
    auto rhs = multiply(frame_derive(f, dir), g) + multiply(f, frame_derive(g, dir));
    CHECK((lhs - rhs).max_abs_coefficient() < 1e-11);
  }
  auto conj_side = frame_derive(f.conj(), Direction::Z1bar);
  CHECK((conj_side - frame_derive(f, Direction::Z1).conj()).max_abs_coefficient() < 1e-12);

  // [Z1, Z1bar] = -i T on scalars
  auto comm = frame_derive(frame_derive(f, Direction::Z1bar), Direction::Z1) -
              frame_derive(frame_derive(f, Direction::Z1), Direction::Z1bar);
  CHECK((comm - Complex(0, -1) * frame_derive(f, Direction::T)).max_abs_coefficient() < 1e-11);
}

TEST_CASE("T is the Hopf rotation") {
  auto f = random_field(4, 5);
  auto df = frame_derive(f, Direction::T);
  for (const auto& p : random_points(10, 3)) CHECK(std::abs(df.evaluate(p) - hopf_derivative(f, p)) < 1e-7);
}

TEST_CASE("Z1 is tangent: flow along Re and Im parts") {
  // Z1 + Z1bar and i(Z1 - Z1bar) are real tangent fields; check via finite differences in C^2
  auto f = random_field(4, 9);
  for (const auto& p : random_points(10, 4)) {
    // X = Z1 + Z1bar moves z by wbar + ..., as a real vector field: dz = wbar, dw = -zbar (holomorphic part)
    const Complex vz = std::conj(p.w);
    const Complex vw = -std::conj(p.z);
    const double h = 1e-6;
    auto at = [&](double t) {
      Point q{p.z + t * vz, p.w + t * vw};
      const double r = std::sqrt(std::norm(q.z) + std::norm(q.w));
      return Point{q.z / r, q.w / r};
    };
    const Complex numeric = (f.evaluate(at(h)) - f.evaluate(at(-h))) / (2 * h);
    const auto x = frame_derive(f, Direction::Z1) + frame_derive(f, Direction::Z1bar);
    CHECK(std::abs(x.evaluate(p) - numeric) < 1e-6);
  }
}

TEST_CASE("integration") {
  const double vol = 4 * std::numbers::pi * std::numbers::pi;
  CHECK(std::abs(integrate(Field::constant(1.0)) - vol) < 1e-12);
  CHECK(std::abs(integrate(Field::z())) == 0.0);
  CHECK(std::abs(integrate(multiply(Field::z(), Field::zbar())) / vol - 0.5) < 1e-14);
  CHECK(std::abs(inner(Field::z(), Field::w())) == 0.0);
  CHECK(std::abs(inner(Field::z(), Field::z()) - inner(Field::w(), Field::w())) < 1e-14);

  // Monte Carlo oracle with 10^6 uniform samples for the normalized moment of |z|^4 |w|^2
  auto pts = random_points(1000000, 42);
  double mc = 0.0;
  for (const auto& p : pts) mc += std::norm(p.z) * std::norm(p.z) * std::norm(p.w);
  mc /= pts.size();
  auto f = Field::monomial({2, 1, 2, 1});
  CHECK(std::abs(integrate(f).real() / vol - mc) < 2e-3 * mc + 1e-4);

  auto x = random_field(6, 12);
  CHECK(std::abs(integrate(x.conj()) - std::conj(integrate(x))) < 1e-12);
  auto y = random_field(5, 13);
  CHECK(std::abs(integrate_product(x, y) - integrate(multiply(x, y))) < 1e-10);
}

TEST_CASE("contact volume: theta0 ^ d theta0 equals twice the round volume") {
  // theta0 = Im(zbar dz + wbar dw); on the Hopf field V = i(z, w) it is 1 and the frame
  // vectors X1 = (wbar, -zbar), X2 = i X1 span the contact plane with d theta0(X1, X2) = 2.
  for (const auto& p : random_points(5, 8)) {
    const Complex vz = std::conj(p.w), vw = -std::conj(p.z);
    auto theta0 = [&](Complex dz, Complex dw) { return (std::conj(p.z) * dz + std::conj(p.w) * dw).imag(); };
    CHECK(std::abs(theta0(Complex(0, 1) * p.z, Complex(0, 1) * p.w) - 1.0) < 1e-14);
    CHECK(std::abs(theta0(vz, vw)) < 1e-14);
    // d theta0 = 2 Im(dzbar ^ dz + ...) evaluated on (X1, i X1): 2 |X1|^2 = 2
    const double dtheta = 2.0 * (std::conj(vz) * Complex(0, 1) * vz + std::conj(vw) * Complex(0, 1) * vw).imag();
    CHECK(std::abs(dtheta - 2.0) < 1e-14);
  }
  // The three vectors V, X1, iX1 are orthonormal in R^4, so theta0^dtheta0 = 2 dvol and Vol = 2 * 2 pi^2.
  CHECK(std::abs(volume() - 2.0 * 2.0 * std::numbers::pi * std::numbers::pi) < 1e-12);
}

TEST_CASE("integration by parts along the frame") {
  auto x = random_field(5, 21);
  auto y = random_field(5, 22);
  for (auto dir : {Direction::Z1, Direction::Z1bar, Direction::T}) {
    const auto s = integrate(multiply(frame_derive(x, dir), y)) + integrate(multiply(x, frame_derive(y, dir)));
    CHECK(std::abs(s) < 1e-10);
  }
}

TEST_CASE("quadrature is exact") {
  auto q = sphere_quadrature(12);
  double wsum = 0.0;
  for (double w : q.weights) wsum += w;
  CHECK(std::abs(wsum - volume()) < 1e-12);
  auto f = random_field(12, 31);
  Complex s = 0.0;
  for (std::size_t i = 0; i < q.points.size(); ++i) s += q.weights[i] * f.evaluate(q.points[i]);
  CHECK(std::abs(s - integrate(f)) < 1e-11);
}

TEST_CASE("projection") {
  auto q = sphere_quadrature(16);
  auto poly = random_field(2, 3);
  auto vals = poly.evaluate(q.points);
  auto pr = project(q.points, vals, 2, q.weights);
  CHECK((pr.field - poly).max_abs_coefficient() < 1e-10);
  CHECK(pr.residual <= 1e-10);

  // exp(0.1 Re(z wbar)) against its truncated series
  auto g = (multiply(Field::z(), Field::wbar()) + multiply(Field::zbar(), Field::w())) * 0.5;
  std::vector<Complex> ev;
  for (const auto& p : q.points) ev.push_back(std::exp(0.1 * (p.z * std::conj(p.w)).real()));
  auto pe = project(q.points, ev, 8, q.weights);
  auto series = exp_series(g * 0.1, 12, 24);
  CHECK(pe.residual <= 1e-9);
  for (const auto& p : random_points(20, 6)) {
    const double exact = std::exp(0.1 * (p.z * std::conj(p.w)).real());
    CHECK(std::abs(series.evaluate(p) - exact) < 1e-14);
    CHECK(std::abs(pe.field.evaluate(p) - exact) < 1e-9);
  }

  auto zb = Field::zbar().evaluate(q.points);
  auto p0 = project(q.points, zb, 0, q.weights);
  CHECK(p0.field.max_abs_coefficient() < 1e-14);
  CHECK(std::abs(p0.residual - std::sqrt(inner(Field::zbar(), Field::zbar()).real())) < 1e-10);
}

TEST_CASE("pointwise agreement") {
  auto x = random_field(4, 41);
  auto y = random_field(4, 42);
  auto xy = multiply(x, y);
  for (const auto& p : random_points(20, 5)) {
    CHECK(std::abs(xy.evaluate(p) - x.evaluate(p) * y.evaluate(p)) < 1e-9);
    CHECK(std::abs(x.conj().evaluate(p) - std::conj(x.evaluate(p))) < 1e-12);
  }
}

TEST_CASE("workspace") {
  Workspace ws(6);
  CHECK(ws.dim() == MonomialTable::instance().dim(6));
  CHECK(ws.gram_min_eigenvalue() > 0.0);
  CHECK(ws.gram_condition_number() < 1e8);
}

TEST_CASE("json round trip") {
  auto x = random_field(3, 50);
  auto y = field_from_json(to_json(x));
  CHECK((x - y).is_zero());
}
