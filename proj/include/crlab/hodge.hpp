#pragma once

// Chern-class potential sigma, the Kohn decomposition of (0,1)-forms and the
// pseudo-Einstein construction built on it.

#include <json.hpp>

#include "crlab/operators.hpp"

namespace crlab {

/// sigma = s1bar theta1bar - conj(s1bar) theta1 + i s0 theta, s0 real.
struct PureImaginaryOneForm {
  Field s1bar;
  Field s0;

  Field s1() const { return s1bar.conj(); }
};

OneForm to_form(const PureImaginaryOneForm& sigma, const StructureData& sd);

struct SigmaResult {
  PureImaginaryOneForm sigma;
  double residual = 0.0;  // sup |d sigma - d omega|
};

/// Seeded by sigma = omega, which is global on S^3; throws NoPrimitive if the
/// residual exceeds tol.
SigmaResult construct_sigma(const StructureData& sd, double tol = 1e-6);
/// sigma + i dh for real h.
PureImaginaryOneForm gauge_shift(const PureImaginaryOneForm& sigma, const Field& h, const StructureData& sd);

struct SigmaResiduals {
  double curvature = 0.0;  // R = s1bar,1 + s1,1bar - s0
  double torsion = 0.0;    // A11,1bar = s1,0 + i s0,1 - A11 s1bar
};
SigmaResiduals verify_sigma(const PureImaginaryOneForm& sigma, const StructureData& sd);

struct KohnDecomposition {
  Field phi;
  ZeroOneForm gamma;
  double residual = 0.0;           // sup |eta - dbar_b phi - gamma|
  double harmonic_residual = 0.0;  // sup |gamma_1bar,1|
  double conjugate_residual = 0.0; // sup |gamma_1,1bar|
  double orthogonality = 0.0;      // |<dbar_b phi, gamma>|
  double gamma_norm = 0.0;         // L2 norm of gamma
  std::size_t basis_dim = 0;
  std::size_t rank = 0;

  Field u() const { return phi.real_part(); }
  Field v() const { return phi.imag_part(); }
};

/// Least squares for phi over canonical monomials of degree <= N in the
/// L2(theta ^ d theta) norm; CR functions span the null space and are dropped
/// by a pseudo-inverse with relative threshold rcond.
KohnDecomposition kohn_decompose(const ZeroOneForm& eta, const StructureData& sd, int N, double rcond = 1e-10);

/// sup |W1 - 2 P1 u - i(A11 gamma_1bar - gamma_1,0)|.
double check_w1_identity(const StructureData& sd, const KohnDecomposition& dec);

/// sup |P1 f - i(A11 gamma_1bar - gamma_1,0)|.
double eq7_residual(const StructureData& sd, const KohnDecomposition& dec, const Field& f);

struct PseudoEinsteinCandidate {
  Coframe cf;
  StructureData sd;
  double w1_norm = 0.0;  // sup |W1~|
};
/// theta~ = e^{(f + 2u)/3} theta.
PseudoEinsteinCandidate pe_candidate(const StructureData& sd, const KohnDecomposition& dec, const Field& f,
                                     int J = 12);

/// sup |P0 f - 2i[(A11 gamma_1bar),1bar - (A1bar1bar gamma_1),1]|.
double check_eq24(const StructureData& sd, const KohnDecomposition& dec, const Field& f);

struct TorsionFreeGamma {
  double gamma_1_0 = 0.0;   // sup |gamma_1,0|
  double eq8 = 0.0;         // sup |R,1 - 2 u_1bar11 + i gamma_1,0|
};
/// Throws NotSasakian if sup |A11| > tol.
TorsionFreeGamma check_torsion_free_gamma(const StructureData& sd, const KohnDecomposition& dec, double tol = 1e-10);

nlohmann::json to_json(const KohnDecomposition& dec);

}  // namespace crlab
