#pragma once

// Forms and vector fields with Field coefficients over the reference frame.
// Components are indexed 0, 1, 2 for (theta0, theta1_0, theta1bar_0) and
// dually (T, Z1, Z1bar). Structure equations of the reference coframe:
//   d e0 = i e1^e2,  d e1 = 2i e0^e1,  d e2 = -2i e0^e2.

#include <array>

#include "crlab/fields.hpp"

namespace crlab {

struct OneForm {
  std::array<Field, 3> c;

  OneForm conj() const { return {{c[0].conj(), c[2].conj(), c[1].conj()}}; }
  OneForm& operator+=(const OneForm& o);
  OneForm& operator-=(const OneForm& o);
  friend OneForm operator+(OneForm x, const OneForm& y) { return x += y; }
  friend OneForm operator-(OneForm x, const OneForm& y) { return x -= y; }
  friend OneForm operator*(OneForm x, Complex s) {
    for (auto& f : x.c) f *= s;
    return x;
  }
};

// Components (01, 02, 12).
struct TwoForm {
  std::array<Field, 3> c;

  TwoForm& operator+=(const TwoForm& o);
  TwoForm& operator-=(const TwoForm& o);
  friend TwoForm operator+(TwoForm x, const TwoForm& y) { return x += y; }
  friend TwoForm operator-(TwoForm x, const TwoForm& y) { return x -= y; }
  friend TwoForm operator*(TwoForm x, Complex s) {
    for (auto& f : x.c) f *= s;
    return x;
  }
};

struct VectorField {
  std::array<Field, 3> c;

  VectorField conj() const { return {{c[0].conj(), c[2].conj(), c[1].conj()}}; }
};

OneForm basis_form(int i);
VectorField basis_vector(int i);

OneForm scale(const Field& f, const OneForm& a, int max_degree);
TwoForm scale(const Field& f, const TwoForm& b, int max_degree);
OneForm differential(const Field& f);
TwoForm d(const OneForm& a);
/// Coefficient of e0^e1^e2.
Field d(const TwoForm& b);
TwoForm wedge(const OneForm& a, const OneForm& b, int max_degree);
/// 3-form coefficient of a ^ b.
Field wedge(const OneForm& a, const TwoForm& b, int max_degree);

Field apply(const VectorField& v, const Field& f, int max_degree);
Field pair(const OneForm& a, const VectorField& v, int max_degree);
Field pair(const TwoForm& b, const VectorField& u, const VectorField& v, int max_degree);
OneForm contract(const VectorField& v, const TwoForm& b, int max_degree);
VectorField scale(const Field& f, const VectorField& v, int max_degree);
VectorField operator+(const VectorField& x, const VectorField& y);
VectorField operator-(const VectorField& x, const VectorField& y);
/// Lie bracket [x, y].
VectorField bracket(const VectorField& x, const VectorField& y, int max_degree);

/// Largest modulus over the default sample set, across components.
double sup_norm(const Field& f);
double sup_norm(const OneForm& a);
double sup_norm(const TwoForm& b);

/// The fixed 50-point sample set used for pointwise residuals.
const std::vector<Point>& default_samples();

}  // namespace crlab
