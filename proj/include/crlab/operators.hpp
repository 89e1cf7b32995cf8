#pragma once

// Covariant differentiation with comma notation, and the scalar operators
// built from it. For a weight-k coefficient C,
//   C,X = X(C) - k omega(X) C,
// and the result has weight k+1, k-1, k for X = Z, Zbar, T.

#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "crlab/structures.hpp"

namespace crlab {

WeightedTensor cov_derive(const WeightedTensor& t, Direction dir, const StructureData& sd);
/// Successive covariant derivatives, applied left to right.
WeightedTensor cov_derive(const WeightedTensor& t, std::initializer_list<Direction> dirs, const StructureData& sd);

/// Volume density of theta ^ d theta relative to the reference theta0 ^ d theta0.
Field volume_density(const StructureData& sd);
/// integral of x * y against theta ^ d theta of the structure.
Complex integrate_sd(const Field& x, const Field& y, const StructureData& sd);
/// integral of x * conj(y) against theta ^ d theta.
Complex inner_sd(const Field& x, const Field& y, const StructureData& sd);

struct CommutationResiduals {
  // Relative to max(1, magnitude of the sides).
  double zero_one = 0.0;     // C,01 - C,10 = C,1bar A11 - k C A11,1bar
  double zero_onebar = 0.0;  // C,0 1bar - C,1bar 0 = C,1 A1bar1bar + k C A1bar1bar,1
  double one_onebar = 0.0;   // C,1 1bar - C,1bar 1 = i C,0 + k R C
  // The second relation with -k C A1bar1bar,1; it is not the conjugate of the
  // first and is kept as a measurement only.
  double zero_onebar_minus_k = 0.0;
};
CommutationResiduals check_commutation(const WeightedTensor& t, const StructureData& sd);

Field sublaplacian(const Field& f, const StructureData& sd);
/// P1 f = f,1bar 1 1 + i A11 f,1bar (weight 1).
WeightedTensor p1(const Field& f, const StructureData& sd);
/// The alternative ordering f,1 1bar 1 + i A11 f,1bar, kept for comparison.
WeightedTensor p1_alternative(const Field& f, const StructureData& sd);
/// P0 f = (P1 f),1bar + conj(P1 conj(f)),1.
Field p0(const Field& f, const StructureData& sd);

/// gamma = g1bar theta1bar.
struct ZeroOneForm {
  Field g1bar;
};

ZeroOneForm dbar_b(const Field& phi, const StructureData& sd);
/// dbar_b^* gamma = -gamma_1bar,1.
Field dbar_star(const ZeroOneForm& gamma, const StructureData& sd);
/// box_b gamma = 2 dbar_b dbar_b^* gamma on (0,1)-forms in dimension 3.
ZeroOneForm box_b(const ZeroOneForm& gamma, const StructureData& sd);

struct TransformCheck {
  std::string name;
  std::string anchor;
  double residual = 0.0;  // sup over the sample set
  double scale = 0.0;     // sup of the compared quantity
};

/// Conformal transformation laws for tilde = solve(rescale(base, exp-series(2 lambda))).
/// The Q law is evaluated with the coefficient 3/4 and with 3; both are reported.
std::vector<TransformCheck> check_transformations(const StructureData& base, const StructureData& tilde,
                                                  const Field& lambda, const Field& f, int J = 12);

}  // namespace crlab
