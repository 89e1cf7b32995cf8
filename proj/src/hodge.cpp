#include "crlab/hodge.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "crlab/errors.hpp"

namespace crlab {

namespace {

constexpr Complex kI{0.0, 1.0};

Field weighted(const Field& x, const StructureData& sd) {
  if (sd.rho.degree() == 0) return x * sd.rho.coefficient({0, 0, 0, 0});
  return multiply_truncated(x, sd.rho, kMaxDegree);
}

}  // namespace

OneForm to_form(const PureImaginaryOneForm& sigma, const StructureData& sd) {
  const int D = sd.degree();
  return scale(sigma.s1bar, sd.cf.theta1bar(), D) - scale(sigma.s1(), sd.cf.theta1, D) +
         scale(sigma.s0 * kI, sd.cf.theta, D);
}

SigmaResult construct_sigma(const StructureData& sd, double tol) {
  SigmaResult r;
  r.sigma.s1bar = sd.omega1bar;
  r.sigma.s0 = (sd.omega0 * -kI).real_part();
  r.residual = sup_norm(d(to_form(r.sigma, sd)) - d(sd.omega));
  if (!(r.residual <= tol)) {
    std::ostringstream msg;
    msg << "no primitive found: d sigma residual " << r.residual;
    throw NoPrimitive(msg.str());
  }
  return r;
}

PureImaginaryOneForm gauge_shift(const PureImaginaryOneForm& sigma, const Field& h, const StructureData& sd) {
  PureImaginaryOneForm out = sigma;
  out.s1bar += kI * cov_derive({h, 0}, Direction::Z1bar, sd).value;
  out.s0 += cov_derive({h, 0}, Direction::T, sd).value.real_part();
  return out;
}

SigmaResiduals verify_sigma(const PureImaginaryOneForm& sigma, const StructureData& sd) {
  using enum Direction;
  const int D = sd.degree();
  const WeightedTensor s1b{sigma.s1bar, -1};
  const WeightedTensor s1{sigma.s1(), 1};
  const WeightedTensor s0{sigma.s0, 0};
  SigmaResiduals r;
  const Field curvature = cov_derive(s1b, Z1, sd).value + cov_derive(s1, Z1bar, sd).value - sigma.s0;
  r.curvature = sup_norm(curvature - sd.R);
  const Field a11_1b = cov_derive({sd.A11, 2}, Z1bar, sd).value;
  const Field torsion = cov_derive(s1, T, sd).value + kI * cov_derive(s0, Z1, sd).value -
                        multiply_truncated(sd.A11, sigma.s1bar, D);
  r.torsion = sup_norm(torsion - a11_1b);
  return r;
}

KohnDecomposition kohn_decompose(const ZeroOneForm& eta, const StructureData& sd, int N, double rcond) {
  const auto& table = MonomialTable::instance();
  const auto n = static_cast<Eigen::Index>(table.dim(N));
  std::vector<Field> cols(n), wcols(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    cols[j] = dbar_b(Field::monomial(table.at(static_cast<std::uint32_t>(j))), sd).g1bar;
    wcols[j] = weighted(cols[j], sd);
  }
  Eigen::MatrixXcd M(n, n);
  Eigen::VectorXcd b(n);
  const Field eta_w = weighted(eta.g1bar, sd);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Field ci = cols[i].conj();
    b(i) = integrate_product(eta_w, ci);
    for (Eigen::Index j = i; j < n; ++j) {
      M(i, j) = integrate_product(wcols[j], ci);
      M(j, i) = std::conj(M(i, j));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
  if (es.info() != Eigen::Success) throw IllConditioned("normal equations eigen-decomposition failed");
  const auto& ev = es.eigenvalues();
  const double cutoff = rcond * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  const Eigen::VectorXcd proj = es.eigenvectors().adjoint() * b;
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n);
  std::size_t rank = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (ev(k) > cutoff) {
      y(k) = proj(k) / ev(k);
      ++rank;
    }
  }
  const Eigen::VectorXcd coeffs = es.eigenvectors() * y;

  KohnDecomposition dec;
  std::vector<Field::Term> terms;
  for (Eigen::Index j = 0; j < n; ++j) terms.push_back({static_cast<std::uint32_t>(j), coeffs(j)});
  dec.phi = Field::from_terms(std::move(terms)).pruned(1e-15);
  dec.basis_dim = static_cast<std::size_t>(n);
  dec.rank = rank;

  const Field dphi = dbar_b(dec.phi, sd).g1bar;
  dec.gamma.g1bar = eta.g1bar - dphi;
  dec.residual = sup_norm(eta.g1bar - dphi - dec.gamma.g1bar);
  dec.harmonic_residual = sup_norm(cov_derive({dec.gamma.g1bar, -1}, Direction::Z1, sd).value);
  dec.conjugate_residual = sup_norm(cov_derive({dec.gamma.g1bar.conj(), 1}, Direction::Z1bar, sd).value);
  dec.orthogonality = std::abs(inner_sd(dphi, dec.gamma.g1bar, sd));
  dec.gamma_norm = std::sqrt(std::max(0.0, inner_sd(dec.gamma.g1bar, dec.gamma.g1bar, sd).real()));
  return dec;
}

namespace {

// i(A11 gamma_1bar - gamma_1,0)
Field gamma_term(const StructureData& sd, const KohnDecomposition& dec) {
  const Field g1b = dec.gamma.g1bar;
  const Field g10 = cov_derive({g1b.conj(), 1}, Direction::T, sd).value;
  return kI * (multiply_truncated(sd.A11, g1b, sd.degree()) - g10);
}

}  // namespace

double check_w1_identity(const StructureData& sd, const KohnDecomposition& dec) {
  const Field W = w1(sd).value;
  return sup_norm(W - p1(dec.u(), sd).value * 2.0 - gamma_term(sd, dec));
}

double eq7_residual(const StructureData& sd, const KohnDecomposition& dec, const Field& f) {
  return sup_norm(p1(f, sd).value - gamma_term(sd, dec));
}

PseudoEinsteinCandidate pe_candidate(const StructureData& sd, const KohnDecomposition& dec, const Field& f, int J) {
  const Field h = (f + dec.u() * 2.0) * (1.0 / 3.0);
  const int D = h.degree() == 0 ? sd.degree() : std::min(sd.degree(), kDefaultWorkDegree);
  PseudoEinsteinCandidate c;
  c.cf = conformal_rescale(sd.cf, h, J, D);
  c.sd = solve_structure(c.cf);
  c.w1_norm = sup_norm(w1(c.sd).value);
  return c;
}

double check_eq24(const StructureData& sd, const KohnDecomposition& dec, const Field& f) {
  const int D = sd.degree();
  const Field g1b = dec.gamma.g1bar;
  const Field a = cov_derive({multiply_truncated(sd.A11, g1b, D), 1}, Direction::Z1bar, sd).value;
  const Field b = cov_derive({multiply_truncated(sd.A11bar, g1b.conj(), D), -1}, Direction::Z1, sd).value;
  return sup_norm(p0(f, sd) - (a - b) * (2.0 * kI));
}

TorsionFreeGamma check_torsion_free_gamma(const StructureData& sd, const KohnDecomposition& dec, double tol) {
  using enum Direction;
  if (!(sup_norm(sd.A11) <= tol)) throw NotSasakian("structure has nonzero pseudohermitian torsion");
  TorsionFreeGamma r;
  const Field g10 = cov_derive({dec.gamma.g1bar.conj(), 1}, T, sd).value;
  r.gamma_1_0 = sup_norm(g10);
  const Field r1 = cov_derive({sd.R, 0}, Z1, sd).value;
  const Field u1b11 = cov_derive({dec.u(), 0}, {Z1bar, Z1, Z1}, sd).value;
  r.eq8 = sup_norm(r1 - u1b11 * 2.0 + kI * g10);
  return r;
}

nlohmann::json to_json(const KohnDecomposition& dec) {
  return {{"basis_dim", dec.basis_dim},
          {"rank", dec.rank},
          {"residual", dec.residual},
          {"harmonic_residual", dec.harmonic_residual},
          {"conjugate_residual", dec.conjugate_residual},
          {"orthogonality", dec.orthogonality},
          {"gamma_norm", dec.gamma_norm},
          {"phi", to_json(dec.phi)}};
}

}  // namespace crlab
