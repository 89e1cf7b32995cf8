#include "crlab/operators.hpp"

#include <algorithm>

namespace crlab {

namespace {

constexpr Complex kI{0.0, 1.0};

double relative(const Field& lhs, const Field& rhs) {
  const double scale = std::max({1.0, sup_norm(lhs), sup_norm(rhs)});
  return sup_norm(lhs - rhs) / scale;
}

}  // namespace

WeightedTensor cov_derive(const WeightedTensor& t, Direction dir, const StructureData& sd) {
  const int D = sd.degree();
  const VectorField* v = nullptr;
  const Field* om = nullptr;
  VectorField zbar;
  int shift = 0;
  switch (dir) {
    case Direction::T:
      v = &sd.cf.T;
      om = &sd.omega0;
      break;
    case Direction::Z1:
      v = &sd.cf.Z;
      om = &sd.omega1;
      shift = 1;
      break;
    case Direction::Z1bar:
      zbar = sd.cf.Zbar();
      v = &zbar;
      om = &sd.omega1bar;
      shift = -1;
      break;
  }
  Field out = apply(*v, t.value, D);
  if (t.weight != 0) out -= multiply_truncated(*om, t.value, D) * static_cast<double>(t.weight);
  return {out, t.weight + shift};
}

WeightedTensor cov_derive(const WeightedTensor& t, std::initializer_list<Direction> dirs, const StructureData& sd) {
  WeightedTensor r = t;
  for (auto dir : dirs) r = cov_derive(r, dir, sd);
  return r;
}

Field volume_density(const StructureData& sd) { return sd.rho; }

Complex integrate_sd(const Field& x, const Field& y, const StructureData& sd) {
  if (sd.rho.degree() == 0) return integrate_product(x, y) * sd.rho.coefficient({0, 0, 0, 0});
  return integrate_product(multiply_truncated(x, sd.rho, kMaxDegree), y);
}

Complex inner_sd(const Field& x, const Field& y, const StructureData& sd) { return integrate_sd(x, y.conj(), sd); }

CommutationResiduals check_commutation(const WeightedTensor& t, const StructureData& sd) {
  using enum Direction;
  const int D = sd.degree();
  const double k = t.weight;
  const auto c0 = cov_derive(t, T, sd);
  const auto c1 = cov_derive(t, Z1, sd);
  const auto c1b = cov_derive(t, Z1bar, sd);
  const Field a11_1b = cov_derive({sd.A11, 2}, Z1bar, sd).value;
  const Field a1b1b_1 = cov_derive({sd.A11bar, -2}, Z1, sd).value;

  CommutationResiduals r;
  {
    const Field lhs = cov_derive(c0, Z1, sd).value - cov_derive(c1, T, sd).value;
    const Field rhs = multiply_truncated(c1b.value, sd.A11, D) - multiply_truncated(t.value, a11_1b, D) * k;
    r.zero_one = relative(lhs, rhs);
  }
  {
    const Field lhs = cov_derive(c0, Z1bar, sd).value - cov_derive(c1b, T, sd).value;
    const Field base = multiply_truncated(c1.value, sd.A11bar, D);
    const Field corr = multiply_truncated(t.value, a1b1b_1, D) * k;
    r.zero_onebar = relative(lhs, base + corr);
    r.zero_onebar_minus_k = relative(lhs, base - corr);
  }
  {
    const Field lhs = cov_derive(c1, Z1bar, sd).value - cov_derive(c1b, Z1, sd).value;
    const Field rhs = kI * c0.value + multiply_truncated(sd.R, t.value, D) * k;
    r.one_onebar = relative(lhs, rhs);
  }
  return r;
}

Field sublaplacian(const Field& f, const StructureData& sd) {
  using enum Direction;
  const WeightedTensor t{f, 0};
  return cov_derive(t, {Z1, Z1bar}, sd).value + cov_derive(t, {Z1bar, Z1}, sd).value;
}

WeightedTensor p1(const Field& f, const StructureData& sd) {
  using enum Direction;
  const auto f1b = cov_derive({f, 0}, Z1bar, sd);
  const auto f1b11 = cov_derive(f1b, {Z1, Z1}, sd);
  return {f1b11.value + kI * multiply_truncated(sd.A11, f1b.value, sd.degree()), 1};
}

WeightedTensor p1_alternative(const Field& f, const StructureData& sd) {
  using enum Direction;
  const auto f1b = cov_derive({f, 0}, Z1bar, sd);
  const auto f11b1 = cov_derive({f, 0}, {Z1, Z1bar, Z1}, sd);
  return {f11b1.value + kI * multiply_truncated(sd.A11, f1b.value, sd.degree()), 1};
}

Field p0(const Field& f, const StructureData& sd) {
  const auto p = p1(f, sd);
  const Field first = cov_derive(p, Direction::Z1bar, sd).value;
  const Field second = f.is_real(0.0) ? first.conj() : cov_derive(p1(f.conj(), sd).conj(), Direction::Z1, sd).value;
  return first + second;
}

ZeroOneForm dbar_b(const Field& phi, const StructureData& sd) {
  return {cov_derive({phi, 0}, Direction::Z1bar, sd).value};
}

Field dbar_star(const ZeroOneForm& gamma, const StructureData& sd) {
  return -cov_derive({gamma.g1bar, -1}, Direction::Z1, sd).value;
}

ZeroOneForm box_b(const ZeroOneForm& gamma, const StructureData& sd) {
  return {dbar_b(dbar_star(gamma, sd), sd).g1bar * 2.0};
}

std::vector<TransformCheck> check_transformations(const StructureData& base, const StructureData& tilde,
                                                  const Field& lambda, const Field& f, int J) {
  const int D = std::min(base.degree(), tilde.degree());
  auto mul = [D](const Field& x, const Field& y) { return multiply_truncated(x, y, D); };
  const Field e3 = exp_series(lambda * -3.0, J, D);
  const Field e4 = exp_series(lambda * -4.0, J, D);
  std::vector<TransformCheck> out;
  auto add = [&](std::string name, std::string anchor, const Field& lhs, const Field& rhs) {
    out.push_back({std::move(name), std::move(anchor), sup_norm(lhs - rhs), sup_norm(lhs)});
  };

  const Field W = w1(base).value;
  const Field Wt = w1(tilde).value;
  const Field P1lambda = p1(lambda, base).value;
  const Field P0lambda = p0(lambda, base);
  add("W1 law", "eq 5", Wt, mul(e3, W - P1lambda * 6.0));
  add("P1 covariance", "eq A", p1(f, tilde).value, mul(e3, p1(f, base).value));
  add("P0 covariance", "eq A", p0(f, tilde), mul(e4, p0(f, base)));

  const Field Q = q_curvature(base).Q;
  const Field Qt = q_curvature(tilde).Q;
  add("Q law, coefficient 3/4", "eq 0b", Qt, mul(e4, Q + P0lambda * 0.75));
  add("Q law, coefficient 3", "eq 0b", Qt, mul(e4, Q + P0lambda * 3.0));

  using enum Direction;
  const Field r1 = cov_derive({base.R, 0}, Z1, base).value;
  const Field a1b = cov_derive({base.A11, 2}, Z1bar, base).value;
  const Field rt1 = cov_derive({tilde.R, 0}, Z1, tilde).value;
  const Field at1b = cov_derive({tilde.A11, 2}, Z1bar, tilde).value;
  add("W1 law, expanded", "eq 0c", rt1 - kI * at1b, mul(e3, r1 - kI * a1b - P1lambda * 6.0));
  return out;
}

}  // namespace crlab
