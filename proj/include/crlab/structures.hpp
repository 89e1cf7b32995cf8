#pragma once

// Admissible coframes {theta, theta1} with dual frames {T, Z, Zbar}, the
// Tanaka-Webster structure solver, conformal rescaling and model structures.
//
// Conventions: d theta = i theta1 ^ theta1bar, and
//   d theta1 = theta1 ^ omega + theta ^ tau1,   tau1 = A_{1bar1bar} theta1bar,
//   omega = omega_0 theta + omega_1 theta1 + omega_1bar theta1bar,  omega + conj(omega) = 0.
// On the reference sphere omega = -2i theta, A11 = 0 and R = 2.

#include <memory>
#include <string>

#include <json.hpp>

#include "crlab/forms.hpp"
#include "crlab/tensor.hpp"

namespace crlab {

inline constexpr int kDefaultWorkDegree = 20;

struct ModelSpec {
  enum class Kind { StandardSphere, LeftInvariant, ConformalPerturb };

  Kind kind = Kind::StandardSphere;
  double a = 1.0;                          // LeftInvariant parameter
  std::shared_ptr<const ModelSpec> base;   // ConformalPerturb base
  Field g;                                 // real exponent; lambda = eps * g
  double eps = 0.1;
  int J = 12;                              // exponential series order
  int work_degree = kDefaultWorkDegree;    // product truncation for perturbed models

  static ModelSpec sphere();
  static ModelSpec left_invariant(double a);
  static ModelSpec perturbed(const ModelSpec& base, const Field& g, double eps, int J = 12,
                             int work_degree = kDefaultWorkDegree);

  /// The conformal exponent lambda = eps * g (zero for unperturbed models).
  Field lambda() const;
  std::string name() const;
};

nlohmann::json to_json(const ModelSpec& spec);
ModelSpec model_from_json(const nlohmann::json& j);

struct Coframe {
  OneForm theta;
  OneForm theta1;
  VectorField T;  // dual frame, carried with the coframe
  VectorField Z;
  int degree = kMaxDegree;  // product truncation

  OneForm theta1bar() const { return theta1.conj(); }
  VectorField Zbar() const { return Z.conj(); }
};

Coframe standard_coframe();
Coframe left_invariant_coframe(double a);
/// theta~ = Phi theta with Phi = exp-series(h); theta1~ = Phi^{1/2}(theta1 + c theta)
/// with c = i Zbar(h). Throws NotPositive if Phi <= 0 at a sample point.
Coframe conformal_rescale(const Coframe& cf, const Field& h, int J, int degree);
Coframe build_coframe(const ModelSpec& spec);

/// sup |d theta - i theta1 ^ theta1bar| over the sample set.
double admissibility_residual(const Coframe& cf);
/// sup |theta_k - conj(theta)_k| and min |theta ^ d theta| over the samples.
double theta_reality_residual(const Coframe& cf);
double min_contact_volume(const Coframe& cf);

struct ReebResult {
  VectorField T;
  double theta_residual = 0.0;     // sup |theta(T) - 1|
  double contract_residual = 0.0;  // sup |d theta(T, .)|
  double pointwise_residual = 0.0; // stored T versus the pointwise linear solve
};

/// Throws Singular if the pointwise 4x3 solve degenerates at a sample.
ReebResult reeb(const Coframe& cf);

struct StructureResiduals {
  double admissibility = 0.0;
  double structure_equation = 0.0;  // d theta1 - theta1 ^ omega - theta ^ tau1
  double omega_skew = 0.0;          // omega + conj(omega)
  double reeb = 0.0;
  double r_imaginary = 0.0;
  double torsion_wedge = 0.0;       // tau_1 ^ theta1
  double eq_b = 0.0;                // d omega(Z, T) - A11,1bar
  double r_independent = 0.0;       // R versus an independent exterior derivative
};

struct StructureData {
  Coframe cf;
  OneForm omega;  // in the reference basis
  Field omega0, omega1, omega1bar;  // frame components
  Field A11, A11bar;
  Field R;
  Field rho;  // theta ^ d theta relative to theta0 ^ d theta0
  ReebResult reeb;
  StructureResiduals residuals;

  int degree() const { return cf.degree; }
};

/// Throws NonAdmissible if the admissibility residual exceeds tol.
StructureData solve_structure(const Coframe& cf, double admissibility_tol = 1e-6);

/// W1 = R,1 - i A11,1bar (weight 1).
WeightedTensor w1(const StructureData& sd);

struct QCurvature {
  Field Q;           // real
  double formula_gap = 0.0;  // sup difference of the two expressions
};
/// Q = -Re(R,1 1bar - i A11,1bar 1bar), cross-checked against
/// -(1/2)[Delta_b R - i(A11,1bar 1bar - A1bar1bar,1 1)].
QCurvature q_curvature(const StructureData& sd);

/// Q11 = R,11/6 + (i/2) R A11 - A11,0 - (2i/3) A11,1bar 1 (weight 2).
WeightedTensor cartan_tensor(const StructureData& sd);

/// sup |d(omega + i R theta) - i[W1 theta1 + conj(W1) theta1bar] ^ theta|.
double check_lemma_l1(const StructureData& sd);

nlohmann::json to_json(const StructureData& sd);

}  // namespace crlab
