#include "crlab/forms.hpp"

#include <algorithm>

namespace crlab {

namespace {

constexpr Complex kI{0.0, 1.0};

Field mul(const Field& x, const Field& y, int max_degree) { return multiply_truncated(x, y, max_degree); }

Field E(const Field& f, int i) {
  static constexpr Direction dirs[] = {Direction::T, Direction::Z1, Direction::Z1bar};
  return frame_derive(f, dirs[i]);
}

}  // namespace

OneForm& OneForm::operator+=(const OneForm& o) {
  for (int i = 0; i < 3; ++i) c[i] += o.c[i];
  return *this;
}
OneForm& OneForm::operator-=(const OneForm& o) {
  for (int i = 0; i < 3; ++i) c[i] -= o.c[i];
  return *this;
}
TwoForm& TwoForm::operator+=(const TwoForm& o) {
  for (int i = 0; i < 3; ++i) c[i] += o.c[i];
  return *this;
}
TwoForm& TwoForm::operator-=(const TwoForm& o) {
  for (int i = 0; i < 3; ++i) c[i] -= o.c[i];
  return *this;
}

OneForm basis_form(int i) {
  OneForm a;
  a.c[i] = Field::constant(1.0);
  return a;
}

VectorField basis_vector(int i) {
  VectorField v;
  v.c[i] = Field::constant(1.0);
  return v;
}

OneForm scale(const Field& f, const OneForm& a, int max_degree) {
  OneForm r;
  for (int i = 0; i < 3; ++i) r.c[i] = mul(f, a.c[i], max_degree);
  return r;
}

TwoForm scale(const Field& f, const TwoForm& b, int max_degree) {
  TwoForm r;
  for (int i = 0; i < 3; ++i) r.c[i] = mul(f, b.c[i], max_degree);
  return r;
}

OneForm differential(const Field& f) { return {{E(f, 0), E(f, 1), E(f, 2)}}; }

TwoForm d(const OneForm& a) {
  TwoForm r;
  r.c[0] = E(a.c[1], 0) - E(a.c[0], 1) + 2.0 * kI * a.c[1];
  r.c[1] = E(a.c[2], 0) - E(a.c[0], 2) - 2.0 * kI * a.c[2];
  r.c[2] = E(a.c[2], 1) - E(a.c[1], 2) + kI * a.c[0];
  return r;
}

Field d(const TwoForm& b) { return E(b.c[0], 2) - E(b.c[1], 1) + E(b.c[2], 0); }

TwoForm wedge(const OneForm& a, const OneForm& b, int max_degree) {
  TwoForm r;
  r.c[0] = mul(a.c[0], b.c[1], max_degree) - mul(a.c[1], b.c[0], max_degree);
  r.c[1] = mul(a.c[0], b.c[2], max_degree) - mul(a.c[2], b.c[0], max_degree);
  r.c[2] = mul(a.c[1], b.c[2], max_degree) - mul(a.c[2], b.c[1], max_degree);
  return r;
}

Field wedge(const OneForm& a, const TwoForm& b, int max_degree) {
  return mul(a.c[0], b.c[2], max_degree) - mul(a.c[1], b.c[1], max_degree) + mul(a.c[2], b.c[0], max_degree);
}

Field apply(const VectorField& v, const Field& f, int max_degree) {
  Field r;
  for (int i = 0; i < 3; ++i)
    if (!v.c[i].is_zero()) r += mul(v.c[i], E(f, i), max_degree);
  return r;
}

Field pair(const OneForm& a, const VectorField& v, int max_degree) {
  Field r;
  for (int i = 0; i < 3; ++i) r += mul(a.c[i], v.c[i], max_degree);
  return r;
}

Field pair(const TwoForm& b, const VectorField& u, const VectorField& v, int max_degree) {
  return pair(contract(u, b, max_degree), v, max_degree);
}

OneForm contract(const VectorField& v, const TwoForm& b, int max_degree) {
  OneForm r;
  r.c[0] = -mul(b.c[0], v.c[1], max_degree) - mul(b.c[1], v.c[2], max_degree);
  r.c[1] = mul(b.c[0], v.c[0], max_degree) - mul(b.c[2], v.c[2], max_degree);
  r.c[2] = mul(b.c[1], v.c[0], max_degree) + mul(b.c[2], v.c[1], max_degree);
  return r;
}

VectorField scale(const Field& f, const VectorField& v, int max_degree) {
  VectorField r;
  for (int i = 0; i < 3; ++i) r.c[i] = mul(f, v.c[i], max_degree);
  return r;
}

VectorField operator+(const VectorField& x, const VectorField& y) {
  VectorField r;
  for (int i = 0; i < 3; ++i) r.c[i] = x.c[i] + y.c[i];
  return r;
}

VectorField operator-(const VectorField& x, const VectorField& y) {
  VectorField r;
  for (int i = 0; i < 3; ++i) r.c[i] = x.c[i] - y.c[i];
  return r;
}

VectorField bracket(const VectorField& x, const VectorField& y, int max_degree) {
  VectorField r;
  for (int j = 0; j < 3; ++j) r.c[j] = apply(x, y.c[j], max_degree) - apply(y, x.c[j], max_degree);
  // [T, Z1] = -2i Z1, [T, Z1bar] = 2i Z1bar, [Z1, Z1bar] = -i T
  auto cross = [&](int i, int j) { return mul(x.c[i], y.c[j], max_degree) - mul(x.c[j], y.c[i], max_degree); };
  r.c[1] += -2.0 * kI * cross(0, 1);
  r.c[2] += 2.0 * kI * cross(0, 2);
  r.c[0] += -kI * cross(1, 2);
  return r;
}

const std::vector<Point>& default_samples() {
  static const auto pts = random_points(50, 20240607);
  return pts;
}

double sup_norm(const Field& f) { return max_abs(f, default_samples()); }

double sup_norm(const OneForm& a) {
  return std::max({sup_norm(a.c[0]), sup_norm(a.c[1]), sup_norm(a.c[2])});
}

double sup_norm(const TwoForm& b) {
  return std::max({sup_norm(b.c[0]), sup_norm(b.c[1]), sup_norm(b.c[2])});
}

}  // namespace crlab
