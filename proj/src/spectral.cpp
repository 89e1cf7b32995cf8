#include "crlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "crlab/analysis.hpp"
#include "crlab/errors.hpp"
#include "crlab/operators.hpp"

namespace crlab {

namespace {

Field weighted(const Field& x, const StructureData& sd) {
  if (sd.rho.degree() == 0) return x * sd.rho.coefficient({0, 0, 0, 0});
  return multiply_truncated(x, sd.rho, kMaxDegree);
}

double real_integral(const Field& x, const Field& y, const StructureData& sd) {
  return integrate_sd(x, y, sd).real();
}

Field combine(const std::vector<Field>& basis, const Eigen::VectorXd& coeffs) {
  Field out;
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (coeffs(static_cast<Eigen::Index>(i)) != 0.0) out += basis[i] * coeffs(static_cast<Eigen::Index>(i));
  return out;
}

}  // namespace

std::vector<Field> real_basis(int N) {
  const auto& table = MonomialTable::instance();
  constexpr Complex kI{0.0, 1.0};
  std::vector<Field> out;
  for (std::size_t k = 0; k < table.dim(N); ++k) {
    const Monomial m = table.at(static_cast<std::uint32_t>(k));
    const Monomial mc = m.conj();
    if (m == mc) {
      out.push_back(Field::monomial(m));
    } else if (table.index(mc) > k) {
      const Field a = Field::monomial(m);
      const Field b = Field::monomial(mc);
      out.push_back(a + b);
      out.push_back(kI * (a - b));
    }
  }
  return out;
}

OperatorMatrix assemble(const StructureData& sd, int N) {
  if (N < 0 || N > kMaxBasisDegree) {
    std::ostringstream msg;
    msg << "truncation N = " << N << " exceeds the basis cap " << kMaxBasisDegree;
    throw CapExceeded(msg.str());
  }
  OperatorMatrix m;
  m.N = N;
  m.basis = real_basis(N);
  const auto n = static_cast<Eigen::Index>(m.basis.size());
  std::vector<Field> we(n), p0e(n), p1e(n), we1b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Field& e = m.basis[i];
    we[i] = weighted(e, sd);
    p0e[i] = p0(e, sd);
    p1e[i] = p1(e, sd).value;
    we1b[i] = weighted(cov_derive({e, 0}, Direction::Z1bar, sd).value, sd);
  }
  m.G.resize(n, n);
  m.K.resize(n, n);
  Eigen::MatrixXd alt(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j >= i) m.G(i, j) = m.G(j, i) = integrate_product(we[i], m.basis[j]).real();
      m.K(i, j) = integrate_product(we[i], p0e[j]).real();
      alt(i, j) = -2.0 * integrate_product(we1b[i], p1e[j]).real();
    }
  }
  const double kmax = std::max(m.K.cwiseAbs().maxCoeff(), 1e-300);
  m.asymmetry = (m.K - m.K.transpose()).cwiseAbs().maxCoeff() / kmax;
  m.eq10_residual = (m.K - alt).cwiseAbs().maxCoeff() / kmax;
  m.K = 0.5 * (m.K + m.K.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gs(m.G, Eigen::EigenvaluesOnly);
  m.g_min_eigenvalue = gs.eigenvalues().minCoeff();
  return m;
}

SpectralReport eigensolve(const OperatorMatrix& m, double threshold) {
  if (!(m.g_min_eigenvalue > 0.0)) throw EigenFailure("Gram matrix is not positive definite");
  // orthonormalize with G^{-1/2} in extended precision; a Cholesky reduction loses
  // about cond(G) * eps in the Rayleigh quotients
  using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<MatrixXld> gs(m.G.cast<long double>());
  if (gs.info() != Eigen::Success) throw EigenFailure("Gram eigensolver did not converge");
  const MatrixXld W = gs.eigenvectors() * gs.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();
  MatrixXld S = W.transpose() * m.K.cast<long double>() * W;
  S = (0.5L * (S + S.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXld> es(S);
  if (es.info() != Eigen::Success) throw EigenFailure("eigensolver did not converge");
  const Eigen::VectorXd mu = es.eigenvalues().cast<double>();
  const Eigen::MatrixXd V = (W * es.eigenvectors()).cast<double>();

  SpectralReport r;
  r.N = m.N;
  r.eigenvalues.assign(mu.data(), mu.data() + mu.size());
  const double scale = mu.size() > 0 ? mu.cwiseAbs().maxCoeff() : 0.0;
  r.threshold = threshold < 0.0 ? 1e-6 * scale : threshold;
  r.Lambda = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < mu.size(); ++k) {
    const Eigen::VectorXd v = V.col(k);
    const double q = v.dot(m.K * v) / v.dot(m.G * v);
    r.rayleigh = std::max(r.rayleigh, std::abs(q - mu(k)));
    Field f = combine(m.basis, v);
    if (std::abs(mu(k)) <= r.threshold) {
      ++r.kernel_dim;
      r.gap_below = std::max(r.gap_below, std::abs(mu(k)));
      r.kernel.push_back(f);
    } else if (mu(k) > r.threshold) {
      r.Lambda = std::min(r.Lambda, mu(k));
    }
    r.eigenfunctions.push_back(std::move(f));
  }
  return r;
}

std::vector<Field> crph_basis(int N) {
  std::vector<Field> out{Field::constant(1.0)};
  for (int d = 1; d <= N; ++d) {
    for (int a = d; a >= 0; --a) {
      const Field m = Field::monomial({a, d - a, 0, 0});
      out.push_back(m.real_part());
      out.push_back(m.imag_part());
    }
  }
  return out;
}

namespace {

// Largest sine of the principal angles of span(a) against span(b); b must be
// L2(dmu)-orthonormal. The squared sines are the generalized eigenvalues of the
// residual Gram matrix against the Gram matrix of a.
double containment_sine(const std::vector<Field>& a, const std::vector<Field>& b, const StructureData& sd) {
  if (a.empty()) return 0.0;
  const auto n = static_cast<Eigen::Index>(a.size());
  std::vector<Field> wb;
  for (const auto& f : b) wb.push_back(weighted(f, sd));
  std::vector<Field> resid(n), wa(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    wa[j] = weighted(a[j], sd);
    Field r = a[j];
    for (std::size_t m = 0; m < wb.size(); ++m) r -= b[m] * integrate_product(wb[m], a[j]).real();
    resid[j] = r;
  }
  Eigen::MatrixXd C(n, n), Rm(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Field wr = weighted(resid[i], sd);
    for (Eigen::Index j = 0; j < n; ++j) {
      C(i, j) = integrate_product(wa[i], a[j]).real();
      Rm(i, j) = integrate_product(wr, resid[j]).real();
    }
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Rm + Rm.transpose()),
                                                                0.5 * (C + C.transpose()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw EigenFailure("principal angle eigensolver did not converge");
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace

std::vector<Field> p1_kernel(const StructureData& sd, const OperatorMatrix& m, double rel) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  std::vector<Field> p1e(n), wp1e(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    p1e[i] = p1(m.basis[i], sd).value;
    wp1e[i] = weighted(p1e[i], sd);
  }
  Eigen::MatrixXd M(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) M(i, j) = M(j, i) = integrate_product(wp1e[i], p1e[j].conj()).real();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(M, m.G);
  if (es.info() != Eigen::Success) throw EigenFailure("P1 kernel eigensolver did not converge");
  const double cut = rel * std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  std::vector<Field> out;
  for (Eigen::Index k = 0; k < n; ++k)
    if (es.eigenvalues()(k) <= cut) out.push_back(combine(m.basis, es.eigenvectors().col(k)));
  return out;
}

SubspaceComparison compare_with_crph(const StructureData& sd, const SpectralReport& report) {
  SubspaceComparison out;
  const auto c = crph_basis(report.N);
  out.crph_dim = c.size();
  out.kernel_dim = report.kernel_dim;
  out.max_sine = containment_sine(c, report.kernel, sd);
  return out;
}

SubspaceComparison compare_with_p1_kernel(const StructureData& sd, const OperatorMatrix& m,
                                          const SpectralReport& report) {
  SubspaceComparison out;
  const auto k1 = p1_kernel(sd, m);
  out.crph_dim = k1.size();
  out.kernel_dim = report.kernel_dim;
  out.max_sine = containment_sine(k1, report.kernel, sd);
  return out;
}

Split decompose_perp(const Field& x, const StructureData& sd, const SpectralReport& report) {
  Split s;
  const Field wx = weighted(x, sd);
  for (const auto& k : report.kernel) s.ker += k * integrate_product(wx, k).real();
  s.ker = s.ker.pruned(1e-15);
  s.perp = x - s.ker;
  s.cross = std::abs(real_integral(s.ker, s.perp, sd));
  return s;
}

BoundCheck evaluate_bound(const StructureData& sd, const Split& u, const Field& Q_perp, double Lambda) {
  BoundCheck b;
  const double uu = real_integral(u.perp, u.perp, sd);
  const double qq = real_integral(Q_perp, Q_perp, sd);
  const double qu = real_integral(Q_perp, u.perp, sd);
  const double pu_perp = real_integral(p0(u.perp, sd), u.perp, sd);
  const Field full = u.ker + u.perp;
  const double pu = real_integral(p0(full, sd), full, sd);
  b.lhs = Lambda * Lambda * uu;
  b.rhs = qq;
  b.margin = b.rhs - b.lhs;
  b.holds = b.margin >= 0.0;
  b.chain = qu + pu_perp;
  b.cauchy_schwarz = std::sqrt(std::max(0.0, qq)) * std::sqrt(std::max(0.0, uu)) - std::abs(qu);
  b.self_adjoint = std::abs(pu - pu_perp);
  return b;
}

BoundCheck check_bound_2018H(const StructureData& sd, const Field& u, const Field& Q, const SpectralReport& report) {
  for (const auto& p : convexity_points(sd, 0.5, 0.5)) {
    if (!is_convex(p, {1e3, 64}).convex) {
      std::ostringstream msg;
      msg << "(1/2,1/2)-convexity fails: R = " << p.R << " <= |A11| + |A11,1bar| = "
          << std::abs(p.A11) + std::abs(p.A11_1bar);
      throw HypothesisUnmet(msg.str());
    }
  }
  const Split us = decompose_perp(u, sd, report);
  const Split qs = decompose_perp(Q, sd, report);
  BoundCheck b = evaluate_bound(sd, us, qs.perp, report.Lambda);
  b.hypothesis = true;
  return b;
}

std::vector<LambdaRow> lambda_table(const StructureData& sd, const std::vector<int>& Ns) {
  std::vector<LambdaRow> rows;
  for (int N : Ns) {
    const auto rep = eigensolve(assemble(sd, N));
    rows.push_back({N, rep.Lambda, rep.kernel_dim});
  }
  return rows;
}

nlohmann::json to_json(const SpectralReport& report) {
  return {{"N", report.N},
          {"threshold", report.threshold},
          {"kernel_dim", report.kernel_dim},
          {"Lambda", report.Lambda},
          {"gap_below", report.gap_below},
          {"rayleigh", report.rayleigh},
          {"eigenvalues", report.eigenvalues}};
}

std::string spectrum_csv(const SpectralReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "index,eigenvalue\n";
  for (std::size_t k = 0; k < report.eigenvalues.size(); ++k) out << k << ',' << report.eigenvalues[k] << '\n';
  return out.str();
}

}  // namespace crlab
