#include "crlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "crlab/errors.hpp"

namespace crlab {

namespace {

constexpr Complex kI{0.0, 1.0};

struct AlphaBeta {
  double alpha;
  double beta;
};

AlphaBeta alpha_beta(const ConvexityPoint& p) {
  return {2.0 * p.C0 * p.A11.real() + p.C1 * p.A11_1bar.real(), 2.0 * p.C0 * p.A11.imag() + p.C1 * p.A11_1bar.imag()};
}

double integral(const Field& x, const StructureData& sd) { return integrate_sd(x, Field::constant(1.0), sd).real(); }

IdentityRow make_row(std::string name, std::string anchor, double lhs, double rhs) {
  return {std::move(name), std::move(anchor), lhs, rhs, std::abs(lhs - rhs)};
}

}  // namespace

double convexity_f(const ConvexityPoint& p, double s) {
  const auto [alpha, beta] = alpha_beta(p);
  return -2.0 * p.C0 * p.A11.imag() + 2.0 * (beta + alpha * s) / (1.0 + s * s);
}

double convexity_form(const ConvexityPoint& p, Complex x) {
  const Complex xb = std::conj(x);
  const Complex a1b1b = std::conj(p.A11);
  const Complex a1b1b_1 = std::conj(p.A11_1bar);
  return p.R * std::norm(x) - 2.0 * p.C0 * (kI * a1b1b * xb * xb).real() - 2.0 * p.C1 * (kI * a1b1b_1 * xb).real();
}

ConvexityMax convexity_closed_form(const ConvexityPoint& p) {
  const auto [alpha, beta] = alpha_beta(p);
  const double r = std::hypot(alpha, beta);
  ConvexityMax m;
  m.value = p.C1 * p.A11_1bar.imag() + r;
  if (alpha != 0.0) {
    m.s0 = (-beta + r) / alpha;
  } else if (beta > 0.0) {
    m.s0 = 0.0;
  } else {
    m.s0 = std::numeric_limits<double>::infinity();
    m.attained = false;
  }
  return m;
}

namespace {

// Maximum of g over s = tan(t), t on a uniform grid of [-atan S, atan S],
// refined by Brent around the best node; s = 0 is always a candidate.
template <class G>
double sup_over_s(G g, const SGrid& grid) {
  const double tmax = std::atan(grid.S);
  const int n = std::max(grid.n, 3);
  auto neg = [&](double t) { return -g(std::tan(t)); };
  double best = g(0.0);
  double best_t = 0.0;
  const double dt = 2.0 * tmax / (n - 1);
  for (int k = 0; k < n; ++k) {
    const double t = -tmax + dt * k;
    const double v = g(std::tan(t));
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  const double lo = std::max(best_t - dt, -tmax);
  const double hi = std::min(best_t + dt, tmax);
  const auto refined = boost::math::tools::brent_find_minima(neg, lo, hi, 52);
  return std::max(best, -refined.second);
}

}  // namespace

double convexity_sampled(const ConvexityPoint& p, const SGrid& grid) {
  const double tail = -2.0 * p.C0 * p.A11.imag();
  return std::max(sup_over_s([&](double s) { return convexity_f(p, s); }, grid), tail);
}

double form_deficit_sampled(const ConvexityPoint& p, const SGrid& grid) {
  // R - form(x)/|x|^2 at x = 1 + si; the |s| -> infinity limit is the x = i direction
  auto g = [&](double s) {
    const Complex x{1.0, s};
    return p.R - convexity_form(p, x) / std::norm(x);
  };
  // the linear C1 term is O(1/s) there, so only the quadratic part survives
  ConvexityPoint quadratic = p;
  quadratic.C1 = 0.0;
  const double tail = p.R - convexity_form(quadratic, Complex{0.0, 1.0});
  return std::max(sup_over_s(g, grid), tail);
}

ConvexityVerdict is_convex(const ConvexityPoint& p, const SGrid& grid) {
  ConvexityVerdict v;
  const double a = std::abs(p.A11);
  const double ap = std::abs(p.A11_1bar);
  v.pinching_bound = 2.0 * (p.C0 * a + p.C1 * ap);
  v.convex = p.R > v.pinching_bound;

  constexpr int kPhases = 24;
  ConvexityPoint q = p;
  v.worst_phase_max = -std::numeric_limits<double>::infinity();
  auto eval = [&](double pa, double pb) {
    q.A11 = std::polar(a, pa);
    q.A11_1bar = std::polar(ap, pb);
    v.worst_phase_max = std::max(v.worst_phase_max, form_deficit_sampled(q, grid));
  };
  for (int i = 0; i < kPhases; ++i)
    for (int j = 0; j < kPhases; ++j)
      eval(2.0 * std::numbers::pi * i / kPhases, 2.0 * std::numbers::pi * j / kPhases);
  eval(std::numbers::pi / 2, std::numbers::pi / 2);  // a = c = 0, b = |A11|, d = |A11,1bar|
  v.form_verdict = p.R > v.worst_phase_max;
  return v;
}

std::vector<ConvexityPoint> random_convexity_points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<ConvexityPoint> out;
  for (std::size_t k = 0; k < n; ++k) {
    ConvexityPoint p;
    p.C0 = unit(rng);
    p.C1 = unit(rng);
    p.A11 = std::polar(0.5 * unit(rng), phase(rng));
    p.A11_1bar = std::polar(0.5 * unit(rng), phase(rng));
    if (k % 4 == 1 && p.C1 > 0.0) {
      // degenerate branch 2 C0 a + C1 c = 0
      p.A11_1bar.real(-2.0 * p.C0 * p.A11.real() / p.C1);
      if (k % 8 == 1) {
        p.A11.imag(-std::abs(p.A11.imag()));
        p.A11_1bar.imag(-std::abs(p.A11_1bar.imag()));
      }
    }
    if (k % 25 == 0) p.A11 = p.A11_1bar = 0.0;
    const double bound = 2.0 * (p.C0 * std::abs(p.A11) + p.C1 * std::abs(p.A11_1bar));
    p.R = bound == 0.0 ? unit(rng) - 0.2 : bound * (0.8 + 0.4 * unit(rng));
    out.push_back(p);
  }
  return out;
}

std::vector<ConvexityPoint> convexity_points(const StructureData& sd, double C0, double C1) {
  const Field a11_1b = cov_derive({sd.A11, 2}, Direction::Z1bar, sd).value;
  std::vector<ConvexityPoint> out;
  for (const Point& x : default_samples())
    out.push_back({sd.R.evaluate(x).real(), sd.A11.evaluate(x), a11_1b.evaluate(x), C0, C1});
  return out;
}

TorsionForms torsion_forms(const StructureData& sd, const ZeroOneForm& gamma) {
  using enum Direction;
  const int D = sd.degree();
  auto mul = [D](const Field& x, const Field& y) { return multiply_truncated(x, y, D); };
  const Field g1b = gamma.g1bar;
  const Field g1 = g1b.conj();
  const Field a11_1b = cov_derive({sd.A11, 2}, Z1bar, sd).value;
  const Field a1b1b_1 = cov_derive({sd.A11bar, -2}, Z1, sd).value;

  TorsionForms t;
  t.tor = kI * (mul(sd.A11bar, mul(g1, g1)) - mul(sd.A11, mul(g1b, g1b)));
  t.tor_prime = kI * (mul(a1b1b_1, g1) - mul(a11_1b, g1b));
  t.two_r_minus = mul(sd.R, mul(g1, g1b)) * 2.0 - t.tor;
  t.imaginary = std::max({sup_norm(t.tor.imag_part()), sup_norm(t.tor_prime.imag_part()),
                          sup_norm(t.two_r_minus.imag_part())});
  t.tor_integral = integral(t.tor, sd);
  t.tor_prime_integral = integral(t.tor_prime, sd);
  t.two_r_minus_integral = integral(t.two_r_minus, sd);
  return t;
}

Field tor_mixed(const StructureData& sd, const Field& f, const ZeroOneForm& gamma) {
  using enum Direction;
  const int D = sd.degree();
  const Field f1 = cov_derive({f, 0}, Z1, sd).value;
  const Field f1b = cov_derive({f, 0}, Z1bar, sd).value;
  const Field g1b = gamma.g1bar;
  return kI * (multiply_truncated(sd.A11bar, multiply_truncated(f1, g1b.conj(), D), D) -
               multiply_truncated(sd.A11, multiply_truncated(f1b, g1b, D), D));
}

const IdentityRow& BochnerReport::row(const std::string& anchor) const {
  for (const auto& r : rows)
    if (r.anchor == anchor) return r;
  throw Error("no identity row with anchor " + anchor);
}

IdentityRow check_29A_first(const StructureData& sd, const Field& f) {
  using enum Direction;
  const Field P1f = p1(f, sd).value;
  const Field f1 = cov_derive({f, 0}, Z1, sd).value;
  const Field f1b = cov_derive({f, 0}, Z1bar, sd).value;
  const double lhs = integrate_sd(p0(f, sd), f, sd).real();
  const double rhs = -(integrate_sd(P1f, f1b, sd) + integrate_sd(P1f.conj(), f1, sd)).real();
  return make_row("int (P0 f) f = -int [(P1 f) f_1bar + conj]", "29A", lhs, rhs);
}

BochnerReport check_bochner_26A(const StructureData& sd, const Field& f, const KohnDecomposition& dec,
                                double delta) {
  using enum Direction;
  BochnerReport rep;
  rep.precondition = eq7_residual(sd, dec, f);
  if (!(rep.precondition <= delta)) {
    std::ostringstream msg;
    msg << "f does not solve P1 f = i(A11 gamma_1bar - gamma_1,0): residual " << rep.precondition;
    throw PreconditionViolated(msg.str());
  }
  const int D = sd.degree();
  const Field g1b = dec.gamma.g1bar;
  const Field g1 = g1b.conj();
  const TorsionForms tf = torsion_forms(sd, dec.gamma);
  const Field g11 = cov_derive({g1, 1}, Z1, sd).value;
  const double t1 = tf.two_r_minus_integral;
  const double t2 = 2.0 * integrate_sd(g11, g11.conj(), sd).real();
  const double i0 = integrate_sd(p0(f, sd), f, sd).real();
  const double tor_f = integral(tor_mixed(sd, f, dec.gamma), sd);

  rep.rows.push_back(make_row("int (2R - Tor)(g,g) + 2 int |g_1,1|^2 + 1/2 int (P0 f) f = 0", "26A",
                              t1 + t2 + 0.5 * i0, 0.0));

  const Field P1f = p1(f, sd).value;
  const Field rhs27 = kI * multiply_truncated(sd.A11, g1b, D) + multiply_truncated(sd.R, g1, D) -
                      cov_derive({g1, 1}, {Z1, Z1bar}, sd).value;
  IdentityRow r27 = make_row("P1 f = i A11 g_1bar + R g_1 - g_1,11bar (sup norm)", "27A", sup_norm(P1f),
                             sup_norm(rhs27));
  r27.residual = sup_norm(P1f - rhs27);
  rep.rows.push_back(r27);

  rep.rows.push_back(make_row("-int Tor(d_b f, g) = int (2R - Tor)(g,g) + 2 int |g_1,1|^2", "28A", -tor_f, t1 + t2));
  IdentityRow first = check_29A_first(sd, f);
  first.name = "29A, first equality";
  first.anchor = "29A first";
  rep.rows.push_back(first);
  rep.rows.push_back(make_row("int (P0 f) f = 2 int Tor(d_b f, g)", "29A", i0, 2.0 * tor_f));
  return rep;
}

BochnerReport check_bochner_2018BB(const StructureData& sd, const KohnDecomposition& dec, const Field& Q,
                                   const Field& u_perp) {
  using enum Direction;
  const int D = sd.degree();
  auto mul = [D](const Field& x, const Field& y) { return multiply_truncated(x, y, D); };
  BochnerReport rep;
  const Field u = dec.u();
  const Field g1b = dec.gamma.g1bar;
  const Field g1 = g1b.conj();
  const TorsionForms tf = torsion_forms(sd, dec.gamma);
  const Field g11 = cov_derive({g1, 1}, Z1, sd).value;
  const Field u1 = cov_derive({u, 0}, Z1, sd).value;
  const Field u1b = cov_derive({u, 0}, Z1bar, sd).value;
  const Field g10 = cov_derive({g1, 1}, T, sd).value;

  const double b1 = integral(mul(sd.R, mul(g1, g1b)), sd) - 0.5 * tf.tor_integral - 0.5 * tf.tor_prime_integral;
  const double b2 = integrate_sd(g11, g11.conj(), sd).real();
  const double b3 = integrate_sd(Q, u, sd).real();
  const double b4 = integrate_sd(p0(u_perp, sd), u_perp, sd).real();
  const double pu = integrate_sd(p0(u, sd), u, sd).real();
  const double tor_u = integral(tor_mixed(sd, u, dec.gamma), sd);

  rep.rows.push_back(make_row(
      "int (R - Tor/2 - Tor'/2)(g,g) + int |g_1,1|^2 + int Q u + int (P0 u_perp) u_perp = 0", "2018BB",
      b1 + b2 + b3 + b4, 0.0));
  rep.rows.push_back(make_row("int (R - Tor/2 - Tor'/2)(g,g) + int |g_1,1|^2 = int Tor(d_b u, g)", "34", b1 + b2,
                              tor_u));

  const Field W = w1(sd).value;
  const Field rhs30 = p1(u, sd).value * 2.0 + kI * (mul(sd.A11, g1b) - g10);
  IdentityRow r30 = make_row("W1 u_1bar = [2 P1 u + i(A11 g_1bar - g_1,0)] u_1bar (sup norm)", "30A",
                             sup_norm(mul(W, u1b)), sup_norm(mul(rhs30, u1b)));
  r30.residual = sup_norm(mul(W - rhs30, u1b));
  rep.rows.push_back(r30);

  const Complex lhs31 = integrate_sd(g10, u1b, sd);
  const Complex rhs31 = integrate_sd(mul(sd.A11bar, u1), g1, sd);
  IdentityRow r31 = make_row("int g_1,0 u_1bar = int A1bar1bar u_1 g_1", "31A", lhs31.real(), rhs31.real());
  r31.residual = std::abs(lhs31 - rhs31);
  rep.rows.push_back(r31);

  rep.rows.push_back(make_row("2 int Q u + 2 int (P0 u) u = -2 int Tor(d_b u, g)", "proof step",
                              2.0 * b3 + 2.0 * pu, -2.0 * tor_u));
  rep.rows.push_back(make_row("int (P0 u) u = int (P0 u_perp) u_perp", "u_perp", pu, b4));
  return rep;
}

nlohmann::json to_json(const BochnerReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"name", r.name}, {"anchor", r.anchor}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"residual", r.residual}});
  return {{"precondition", report.precondition}, {"rows", rows}};
}

}  // namespace crlab
