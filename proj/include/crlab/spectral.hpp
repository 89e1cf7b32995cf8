#pragma once

// Galerkin discretization of P0 over real polynomials of degree <= N, its
// numerical kernel, and the first-eigenvalue bound for Q and u.

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "crlab/structures.hpp"

namespace crlab {

/// Real basis of the degree <= N span: m for self-conjugate canonical
/// monomials, m + conj(m) and i(m - conj(m)) for each conjugate pair.
std::vector<Field> real_basis(int N);

struct OperatorMatrix {
  int N = 0;
  std::vector<Field> basis;
  Eigen::MatrixXd G;  // int e_i e_j dmu
  Eigen::MatrixXd K;  // int (P0 e_j) e_i dmu, symmetrized
  double asymmetry = 0.0;     // max |K_ij - K_ji| / max |K|, before symmetrizing
  double eq10_residual = 0.0; // max |K_ij + int [(P1 e_j) e_i,1bar + conj]| / max |K|
  double g_min_eigenvalue = 0.0;

  std::size_t dim() const { return basis.size(); }
};

/// Throws CapExceeded when N > kMaxBasisDegree.
inline constexpr int kMaxBasisDegree = 12;
OperatorMatrix assemble(const StructureData& sd, int N);

struct SpectralReport {
  int N = 0;
  std::vector<double> eigenvalues;  // ascending
  double threshold = 0.0;
  std::size_t kernel_dim = 0;
  double Lambda = 0.0;     // smallest eigenvalue above threshold
  double gap_below = 0.0;  // largest |mu| inside the kernel
  double rayleigh = 0.0;   // max |<P0 v, v>/<v, v> - mu| over eigenpairs
  std::vector<Field> kernel;  // L2(dmu)-orthonormal kernel functions
  std::vector<Field> eigenfunctions;  // all, L2(dmu)-orthonormal, same order as eigenvalues
};

/// Dense generalized problem K v = mu G v. threshold < 0 selects the default
/// 1e-6 * max |mu|. Throws EigenFailure.
SpectralReport eigensolve(const OperatorMatrix& m, double threshold = -1.0);

/// Span of Re(z^a w^b), Im(z^a w^b), a + b <= N.
std::vector<Field> crph_basis(int N);

struct SubspaceComparison {
  std::size_t crph_dim = 0;  // dimension of the compared subspace
  std::size_t kernel_dim = 0;
  double max_sine = 0.0;  // largest sine of the principal angles of crph against the kernel
};
SubspaceComparison compare_with_crph(const StructureData& sd, const SpectralReport& report);

/// Real f in the trial space with P1 f = 0 (relative threshold rel on the
/// generalized eigenvalues of int |P1 f|^2 against G), L2(dmu)-orthonormal.
std::vector<Field> p1_kernel(const StructureData& sd, const OperatorMatrix& m, double rel = 1e-10);
/// Same comparison with the numerical ker P1 in place of the crph span; this is
/// the containment ker P1 in ker P0 on structures where the standard
/// pluriharmonic functions are not CR-pluriharmonic.
SubspaceComparison compare_with_p1_kernel(const StructureData& sd, const OperatorMatrix& m,
                                          const SpectralReport& report);

struct Split {
  Field ker;
  Field perp;
  double cross = 0.0;  // |int ker perp dmu|
};
Split decompose_perp(const Field& x, const StructureData& sd, const SpectralReport& report);

struct BoundCheck {
  bool hypothesis = false;  // (1/2, 1/2)-pinching at every sample
  double lhs = 0.0;         // Lambda^2 int (u_perp)^2
  double rhs = 0.0;         // int (Q_perp)^2
  double margin = 0.0;      // rhs - lhs
  bool holds = false;
  double chain = 0.0;       // int Q_perp u_perp + int (P0 u_perp) u_perp
  double cauchy_schwarz = 0.0;  // ||Q_perp|| ||u_perp|| - |int Q_perp u_perp|, >= 0
  double self_adjoint = 0.0;    // |int (P0 u) u - int (P0 u_perp) u_perp|
};
/// Throws HypothesisUnmet when the model is not (1/2, 1/2)-convex.
BoundCheck check_bound_2018H(const StructureData& sd, const Field& u, const Field& Q, const SpectralReport& report);
/// Same evaluation with a prescribed Q_perp; no hypothesis check.
BoundCheck evaluate_bound(const StructureData& sd, const Split& u, const Field& Q_perp, double Lambda);

struct LambdaRow {
  int N;
  double Lambda;
  std::size_t kernel_dim;
};
std::vector<LambdaRow> lambda_table(const StructureData& sd, const std::vector<int>& Ns);

nlohmann::json to_json(const SpectralReport& report);
std::string spectrum_csv(const SpectralReport& report);

}  // namespace crlab
