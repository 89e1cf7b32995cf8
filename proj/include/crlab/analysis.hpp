#pragma once

// (C0, C1)-convexity and the torsion quadratic forms, plus the integral
// Bochner identities for the harmonic part gamma of the Kohn decomposition.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "crlab/hodge.hpp"

namespace crlab {

struct ConvexityPoint {
  double R = 0.0;
  Complex A11;       // a + b i
  Complex A11_1bar;  // c + d i
  double C0 = 0.5;
  double C1 = 0.5;
};

/// f(s) = -2[C0 b - ((2 C0 b + C1 d) + (2 C0 a + C1 c) s) / (1 + s^2)].
double convexity_f(const ConvexityPoint& p, double s);
/// R|x|^2 - 2 C0 Re[i A1bar1bar xbar^2] - 2 C1 Re[i A1bar1bar,1 xbar] at X = x Z1.
double convexity_form(const ConvexityPoint& p, Complex x);

struct ConvexityMax {
  double value = 0.0;
  double s0 = 0.0;
  bool attained = true;  // false when the supremum is the |s| -> infinity limit -2 C0 b
};
ConvexityMax convexity_closed_form(const ConvexityPoint& p);

struct SGrid {
  double S = 1e3;
  int n = 720;
};
/// Grid maximum of f over s in [-S, S] (tangent-spaced, Brent-refined) together
/// with the tail limit -2 C0 b.
double convexity_sampled(const ConvexityPoint& p, const SGrid& grid = {});

/// sup over s of R - form(x)/|x|^2 at x = 1 + si, evaluated from the form
/// itself; equals sup f when the form and f agree.
double form_deficit_sampled(const ConvexityPoint& p, const SGrid& grid = {});

struct ConvexityVerdict {
  bool convex = false;          // R > 2(C0|A11| + C1|A11,1bar|)
  double pinching_bound = 0.0;
  double worst_phase_max = 0.0; // sup over s and torsion phases of R - form/|x|^2, sampled
  bool form_verdict = false;    // R > worst_phase_max
};
/// Pinching verdict, with the eq-(33) form evaluated over the phase-worst X
/// (a 24 x 24 phase grid plus the aligned phases).
ConvexityVerdict is_convex(const ConvexityPoint& p, const SGrid& grid = {});

/// Seeded property-test inputs: every fourth point sits on the degenerate
/// branch 2 C0 a + C1 c = 0 (half of those with b, d <= 0), a few are
/// torsion-free, and R straddles the pinching bound.
std::vector<ConvexityPoint> random_convexity_points(std::size_t n, std::uint64_t seed);

/// Pointwise data of the model at the sample set.
std::vector<ConvexityPoint> convexity_points(const StructureData& sd, double C0, double C1);

struct TorsionForms {
  Field tor;          // Tor(gamma, gamma) = i(A1bar1bar g1^2 - A11 g1bar^2)
  Field tor_prime;    // Tor'(gamma, gamma) = i(A1bar1bar,1 g1 - A11,1bar g1bar)
  Field two_r_minus;  // (2R - Tor)(gamma, gamma)
  double tor_integral = 0.0;
  double tor_prime_integral = 0.0;
  double two_r_minus_integral = 0.0;
  double imaginary = 0.0;  // largest imaginary part of the three fields at the samples
};
TorsionForms torsion_forms(const StructureData& sd, const ZeroOneForm& gamma);
/// Tor(d_b f, gamma) = i(A1bar1bar f_1 g1 - A11 f_1bar g1bar).
Field tor_mixed(const StructureData& sd, const Field& f, const ZeroOneForm& gamma);

struct IdentityRow {
  std::string name;
  std::string anchor;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

struct BochnerReport {
  std::vector<IdentityRow> rows;
  double precondition = 0.0;  // eq (7) residual for 26A

  const IdentityRow& row(const std::string& anchor) const;
};

/// Throws PreconditionViolated if the eq (7) residual exceeds delta.
BochnerReport check_bochner_26A(const StructureData& sd, const Field& f, const KohnDecomposition& dec,
                                double delta = 1e-6);
/// Standalone first equality of (29A): int (P0 f) f = -int [(P1 f) f_1bar + conj].
IdentityRow check_29A_first(const StructureData& sd, const Field& f);

BochnerReport check_bochner_2018BB(const StructureData& sd, const KohnDecomposition& dec, const Field& Q,
                                   const Field& u_perp);

nlohmann::json to_json(const BochnerReport& report);

}  // namespace crlab
