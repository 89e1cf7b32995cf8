#pragma once

// Polynomial function algebra on S^3 = {|z|^2 + |w|^2 = 1} in C^2.
//
// A Field is a finite linear combination of reduced monomials
// z^a w^b zbar^c wbar^d with min(a, c) = 0; the sphere relation
// z zbar = 1 - w wbar is applied until that holds. The set is closed under
// the reference left-invariant frame
//
//   Z1    = wbar d/dz - zbar d/dw
//   Z1bar = w d/dzbar - z d/dwbar
//   T     = i (z d/dz + w d/dw - zbar d/dzbar - wbar d/dwbar)
//
// with dual coframe {theta0, theta1_0, theta1bar_0}. Brackets:
// [Z1, Z1bar] = -i T, [T, Z1] = -2i Z1, [T, Z1bar] = 2i Z1bar, so
// d theta0 = i theta1_0 ^ theta1bar_0, theta0(T) = 1 and T is the Reeb field.
// theta0 = Im(zbar dz + wbar dw), and theta0 ^ d theta0 is twice the round
// volume form, so the total volume is 4 pi^2.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace crlab {

using Complex = std::complex<double>;

/// Largest total degree the monomial index table supports.
inline constexpr int kMaxDegree = 32;

struct Monomial {
  int a = 0;  // z
  int b = 0;  // w
  int c = 0;  // zbar
  int d = 0;  // wbar

  constexpr int degree() const { return a + b + c + d; }
  constexpr bool canonical() const { return a == 0 || c == 0; }
  constexpr Monomial conj() const { return {c, d, a, b}; }
  // U(1) x U(1) charges; the integral vanishes unless both are zero.
  constexpr int charge_z() const { return a - c; }
  constexpr int charge_w() const { return b - d; }
  friend constexpr bool operator==(const Monomial&, const Monomial&) = default;
};

/// Enumeration of canonical monomials ordered by total degree, so that the
/// monomials of degree <= D occupy the index prefix [0, dim(D)).
class MonomialTable {
 public:
  static const MonomialTable& instance();

  std::size_t dim(int max_degree) const;
  std::uint32_t index(const Monomial& m) const;
  const Monomial& at(std::uint32_t index) const { return monomials_[index]; }
  std::size_t size() const { return monomials_.size(); }

 private:
  MonomialTable();
  std::vector<Monomial> monomials_;
  std::vector<std::size_t> prefix_;       // prefix_[k] = dim(k - 1)
  std::vector<std::int32_t> lookup_;      // dense (a,b,c,d) -> index
};

struct Point {
  Complex z;
  Complex w;
};

class Field {
 public:
  struct Term {
    std::uint32_t index;
    Complex value;
  };

  Field() = default;

  static Field constant(Complex c);
  /// Reduces m to canonical form first.
  static Field monomial(const Monomial& m, Complex coefficient = 1.0);
  static Field z() { return monomial({1, 0, 0, 0}); }
  static Field w() { return monomial({0, 1, 0, 0}); }
  static Field zbar() { return monomial({0, 0, 1, 0}); }
  static Field wbar() { return monomial({0, 0, 0, 1}); }
  /// Terms need not be sorted or unique; duplicates are summed.
  static Field from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  Complex coefficient(const Monomial& m) const;
  double max_abs_coefficient() const;

  Field conj() const;
  Field real_part() const;
  Field imag_part() const;
  bool is_real(double tol = 1e-12) const;
  Field truncated(int max_degree) const;
  /// Drops coefficients with modulus <= tol.
  Field pruned(double tol) const;

  Complex evaluate(const Point& p) const;
  std::vector<Complex> evaluate(std::span<const Point> points) const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(Complex s);

  friend Field operator+(Field x, const Field& y) { return x += y; }
  friend Field operator-(Field x, const Field& y) { return x -= y; }
  friend Field operator-(Field x) { return x *= -1.0; }
  friend Field operator*(Field x, Complex s) { return x *= s; }
  friend Field operator*(Complex s, Field x) { return x *= s; }
  friend Field operator*(Field x, double s) { return x *= Complex(s); }
  friend Field operator*(double s, Field x) { return x *= Complex(s); }

 private:
  std::vector<Term> terms_;  // sorted by index, no exact zeros
};

/// Exact product; throws CapExceeded when deg(x) + deg(y) > cap.
Field multiply(const Field& x, const Field& y, int cap = kMaxDegree);
/// Product with every output term of degree > max_degree discarded.
Field multiply_truncated(const Field& x, const Field& y, int max_degree);

enum class Direction { Z1, Z1bar, T };

/// Action of the reference frame field; exact and degree preserving.
Field frame_derive(const Field& x, Direction dir);

/// Total volume of S^3 against theta0 ^ d theta0.
double volume();
/// Exact integral against theta0 ^ d theta0, summed in canonical index order.
Complex integrate(const Field& x);
/// integrate(x * y) without forming the product.
Complex integrate_product(const Field& x, const Field& y);
/// integrate(x * conj(y)).
Complex inner(const Field& x, const Field& y);
/// Root-mean-square value, sqrt(inner(x, x) / volume()).
double rms(const Field& x);
/// Largest modulus of x over the given points.
double max_abs(const Field& x, std::span<const Point> points);

/// sum_{k<=order} h^k / k!, every product truncated at max_degree.
Field exp_series(const Field& h, int order, int max_degree);

/// Uniformly distributed points on S^3 (deterministic for a given seed).
std::vector<Point> random_points(std::size_t count, std::uint64_t seed);
/// Random complex Field of degree <= max_degree; real when real_valued is set.
Field random_field(int max_degree, std::uint64_t seed, bool real_valued = false);

/// Product quadrature rule exact for polynomials of total degree <= degree:
/// Gauss-Legendre in t = |w|^2 times uniform grids in both phases. Weights sum
/// to volume().
struct Quadrature {
  std::vector<Point> points;
  std::vector<double> weights;
};
Quadrature sphere_quadrature(int degree);

struct Projection {
  Field field;
  double residual = 0.0;          // weighted l2 norm of the sample residual
  double condition_number = 0.0;  // of the weighted design matrix
};

/// Least-squares fit over canonical monomials of degree <= max_degree.
/// Weights default to uniform. Throws IllConditioned when the design
/// matrix condition number exceeds condition_limit.
Projection project(std::span<const Point> points, std::span<const Complex> values, int max_degree,
                   std::span<const double> weights = {}, double condition_limit = 1e12);

/// Shared per-truncation data: canonical basis, Gram matrix (block diagonal
/// by charge), and sample sets. Immutable after construction.
class Workspace {
 public:
  explicit Workspace(int cap, std::uint64_t seed = 20240607);

  int cap() const { return cap_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<Monomial>& basis() const { return basis_; }
  const std::vector<Complex>& gram() const { return gram_; }  // row-major dim x dim
  double gram_min_eigenvalue() const { return gram_min_eig_; }
  double gram_condition_number() const { return gram_cond_; }
  const Quadrature& quadrature() const { return quadrature_; }
  const std::vector<Point>& sample_points() const { return samples_; }

 private:
  int cap_;
  std::vector<Monomial> basis_;
  std::vector<Complex> gram_;
  double gram_min_eig_ = 0.0;
  double gram_cond_ = 0.0;
  Quadrature quadrature_;
  std::vector<Point> samples_;
};

/// Golden-file schema: {"terms": [[a, b, c, d, re, im], ...]}.
nlohmann::json to_json(const Field& x);
Field field_from_json(const nlohmann::json& j);

std::string to_string(const Field& x);

}  // namespace crlab
