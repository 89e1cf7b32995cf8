#include "crlab/fields.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <gsl/gsl_integration.h>

#include "crlab/errors.hpp"

namespace crlab {

namespace {

constexpr int kSide = kMaxDegree + 1;
constexpr int kBinomMax = 2 * kMaxDegree + 2;

std::size_t lookup_offset(int a, int b, int c, int d) {
  return ((static_cast<std::size_t>(a) * kSide + b) * kSide + c) * kSide + d;
}

const std::array<std::array<double, kBinomMax + 1>, kBinomMax + 1>& binomials() {
  static const auto table = [] {
    std::array<std::array<double, kBinomMax + 1>, kBinomMax + 1> t{};
    for (int n = 0; n <= kBinomMax; ++n) {
      t[n][0] = 1.0;
      for (int k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0.0);
    }
    return t;
  }();
  return table;
}

// integral of |z|^{2A} |w|^{2B} over S^3 divided by the volume: A! B! / (A+B+1)!
double moment(int a, int b) {
  return 1.0 / (static_cast<double>(a + b + 1) * binomials()[a + b][a]);
}

// Dense scatter buffer reused by products and derivatives.
class Accumulator {
 public:
  void reset(std::size_t n) {
    if (buffer_.size() < n) {
      buffer_.resize(n, Complex(0.0));
      marked_.resize(n, 0);
    }
    touched_.clear();
  }
  void add(std::uint32_t index, Complex v) {
    if (!marked_[index]) {
      marked_[index] = 1;
      touched_.push_back(index);
    }
    buffer_[index] += v;
  }
  Field collect() {
    std::sort(touched_.begin(), touched_.end());
    std::vector<Field::Term> terms;
    terms.reserve(touched_.size());
    for (auto i : touched_) {
      if (buffer_[i] != Complex(0.0)) terms.push_back({i, buffer_[i]});
      buffer_[i] = Complex(0.0);
      marked_[i] = 0;
    }
    touched_.clear();
    return Field::from_terms(std::move(terms));
  }

 private:
  std::vector<Complex> buffer_;
  std::vector<char> marked_;
  std::vector<std::uint32_t> touched_;
};

Accumulator& accumulator() {
  thread_local Accumulator acc;
  return acc;
}

// Adds coefficient * z^a w^b zbar^c wbar^d, reduced, dropping degrees > max_degree.
void add_reduced(Accumulator& acc, int a, int b, int c, int d, Complex coefficient, int max_degree) {
  const auto& table = MonomialTable::instance();
  const int m = std::min(a, c);
  const int base = a + b + c + d - 2 * m;
  const auto& binom = binomials();
  for (int j = 0; j <= m; ++j) {
    if (base + 2 * j > max_degree) break;
    const double s = (j % 2 == 0 ? 1.0 : -1.0) * binom[m][j];
    acc.add(table.index({a - m, b + j, c - m, d + j}), coefficient * s);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// MonomialTable

MonomialTable::MonomialTable() : lookup_(static_cast<std::size_t>(kSide) * kSide * kSide * kSide, -1) {
  prefix_.push_back(0);
  for (int k = 0; k <= kMaxDegree; ++k) {
    for (int a = 0; a <= k; ++a)
      for (int b = 0; a + b <= k; ++b)
        for (int c = 0; a + b + c <= k; ++c) {
          const int d = k - a - b - c;
          if (a != 0 && c != 0) continue;
          lookup_[lookup_offset(a, b, c, d)] = static_cast<std::int32_t>(monomials_.size());
          monomials_.push_back({a, b, c, d});
        }
    prefix_.push_back(monomials_.size());
  }
}

const MonomialTable& MonomialTable::instance() {
  static const MonomialTable table;
  return table;
}

std::size_t MonomialTable::dim(int max_degree) const {
  if (max_degree < 0) return 0;
  if (max_degree > kMaxDegree) throw CapExceeded("degree " + std::to_string(max_degree) + " exceeds table size");
  return prefix_[max_degree + 1];
}

std::uint32_t MonomialTable::index(const Monomial& m) const {
  if (m.degree() > kMaxDegree) throw CapExceeded("monomial degree exceeds table size");
  const auto i = lookup_[lookup_offset(m.a, m.b, m.c, m.d)];
  if (i < 0) throw Error("monomial is not in canonical form");
  return static_cast<std::uint32_t>(i);
}

// ---------------------------------------------------------------------------
// Field

Field Field::constant(Complex c) {
  Field f;
  if (c != Complex(0.0)) f.terms_.push_back({0, c});
  return f;
}

Field Field::monomial(const Monomial& m, Complex coefficient) {
  if (m.degree() > kMaxDegree) throw CapExceeded("monomial degree exceeds table size");
  auto& acc = accumulator();
  acc.reset(MonomialTable::instance().size());
  add_reduced(acc, m.a, m.b, m.c, m.d, coefficient, kMaxDegree);
  return acc.collect();
}

Field Field::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.index < y.index; });
  Field f;
  f.terms_.reserve(terms.size());
  for (const auto& t : terms) {
    if (!f.terms_.empty() && f.terms_.back().index == t.index) {
      f.terms_.back().value += t.value;
    } else {
      f.terms_.push_back(t);
    }
  }
  std::erase_if(f.terms_, [](const Term& t) { return t.value == Complex(0.0); });
  return f;
}

int Field::degree() const {
  if (terms_.empty()) return 0;
  return MonomialTable::instance().at(terms_.back().index).degree();
}

Complex Field::coefficient(const Monomial& m) const {
  const auto idx = MonomialTable::instance().index(m);
  auto it = std::lower_bound(terms_.begin(), terms_.end(), idx,
                             [](const Term& t, std::uint32_t i) { return t.index < i; });
  return (it != terms_.end() && it->index == idx) ? it->value : Complex(0.0);
}

double Field::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.value));
  return m;
}

Field Field::conj() const {
  const auto& table = MonomialTable::instance();
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({table.index(table.at(t.index).conj()), std::conj(t.value)});
  return from_terms(std::move(out));
}

Field Field::real_part() const { return (*this + conj()) * 0.5; }

Field Field::imag_part() const { return (*this - conj()) * Complex(0.0, -0.5); }

bool Field::is_real(double tol) const { return (*this - conj()).max_abs_coefficient() <= tol; }

Field Field::truncated(int max_degree) const {
  const auto n = MonomialTable::instance().dim(std::min(max_degree, kMaxDegree));
  Field f;
  for (const auto& t : terms_)
    if (t.index < n) f.terms_.push_back(t);
  return f;
}

Field Field::pruned(double tol) const {
  Field f;
  for (const auto& t : terms_)
    if (std::abs(t.value) > tol) f.terms_.push_back(t);
  return f;
}

Complex Field::evaluate(const Point& p) const {
  if (terms_.empty()) return 0.0;
  const int n = degree();
  std::vector<Complex> pz(n + 1), pw(n + 1), pzb(n + 1), pwb(n + 1);
  pz[0] = pw[0] = pzb[0] = pwb[0] = 1.0;
  for (int k = 1; k <= n; ++k) {
    pz[k] = pz[k - 1] * p.z;
    pw[k] = pw[k - 1] * p.w;
    pzb[k] = pzb[k - 1] * std::conj(p.z);
    pwb[k] = pwb[k - 1] * std::conj(p.w);
  }
  const auto& table = MonomialTable::instance();
  Complex sum = 0.0;
  for (const auto& t : terms_) {
    const auto& m = table.at(t.index);
    sum += t.value * pz[m.a] * pw[m.b] * pzb[m.c] * pwb[m.d];
  }
  return sum;
}

std::vector<Complex> Field::evaluate(std::span<const Point> points) const {
  std::vector<Complex> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(evaluate(p));
  return out;
}

Field& Field::operator+=(const Field& other) {
  std::vector<Term> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto i = terms_.begin();
  auto j = other.terms_.begin();
  while (i != terms_.end() || j != other.terms_.end()) {
    if (j == other.terms_.end() || (i != terms_.end() && i->index < j->index)) {
      merged.push_back(*i++);
    } else if (i == terms_.end() || j->index < i->index) {
      merged.push_back(*j++);
    } else {
      const Complex v = i->value + j->value;
      if (v != Complex(0.0)) merged.push_back({i->index, v});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

Field& Field::operator-=(const Field& other) { return *this += other * -1.0; }

Field& Field::operator*=(Complex s) {
  if (s == Complex(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.value *= s;
  return *this;
}

// ---------------------------------------------------------------------------
// Algebra

namespace {

Field multiply_impl(const Field& x, const Field& y, int max_degree) {
  if (x.is_zero() || y.is_zero()) return {};
  const auto& table = MonomialTable::instance();
  if (x.size() == 1 && x.terms()[0].index == 0) return y.truncated(max_degree) * x.terms()[0].value;
  if (y.size() == 1 && y.terms()[0].index == 0) return x.truncated(max_degree) * y.terms()[0].value;
  auto& acc = accumulator();
  acc.reset(table.dim(max_degree));
  for (const auto& s : x.terms()) {
    const auto& m = table.at(s.index);
    for (const auto& t : y.terms()) {
      const auto& n = table.at(t.index);
      add_reduced(acc, m.a + n.a, m.b + n.b, m.c + n.c, m.d + n.d, s.value * t.value, max_degree);
    }
  }
  return acc.collect();
}

}  // namespace

Field multiply(const Field& x, const Field& y, int cap) {
  if (x.is_zero() || y.is_zero()) return {};
  if (x.degree() + y.degree() > std::min(cap, kMaxDegree)) {
    throw CapExceeded("product degree " + std::to_string(x.degree() + y.degree()) + " exceeds cap " +
                      std::to_string(cap));
  }
  return multiply_impl(x, y, kMaxDegree);
}

Field multiply_truncated(const Field& x, const Field& y, int max_degree) {
  return multiply_impl(x, y, std::min(max_degree, kMaxDegree));
}

Field frame_derive(const Field& x, Direction dir) {
  const auto& table = MonomialTable::instance();
  if (dir == Direction::T) {
    std::vector<Field::Term> out;
    out.reserve(x.size());
    for (const auto& t : x.terms()) {
      const auto& m = table.at(t.index);
      const double q = m.a + m.b - m.c - m.d;
      if (q != 0.0) out.push_back({t.index, t.value * Complex(0.0, q)});
    }
    return Field::from_terms(std::move(out));
  }
  auto& acc = accumulator();
  acc.reset(table.size());
  for (const auto& t : x.terms()) {
    const auto& m = table.at(t.index);
    if (dir == Direction::Z1) {
      // z -> wbar, w -> -zbar
      if (m.a > 0) add_reduced(acc, m.a - 1, m.b, m.c, m.d + 1, t.value * double(m.a), kMaxDegree);
      if (m.b > 0) add_reduced(acc, m.a, m.b - 1, m.c + 1, m.d, -t.value * double(m.b), kMaxDegree);
    } else {
      // zbar -> w, wbar -> -z
      if (m.c > 0) add_reduced(acc, m.a, m.b + 1, m.c - 1, m.d, t.value * double(m.c), kMaxDegree);
      if (m.d > 0) add_reduced(acc, m.a + 1, m.b, m.c, m.d - 1, -t.value * double(m.d), kMaxDegree);
    }
  }
  return acc.collect();
}

double volume() { return 4.0 * std::numbers::pi * std::numbers::pi; }

Complex integrate(const Field& x) {
  const auto& table = MonomialTable::instance();
  Complex sum = 0.0;
  for (const auto& t : x.terms()) {
    const auto& m = table.at(t.index);
    if (m.a == 0 && m.c == 0 && m.b == m.d) sum += t.value * moment(0, m.b);
  }
  return sum * volume();
}

Complex integrate_product(const Field& x, const Field& y) {
  const auto& table = MonomialTable::instance();
  // y terms grouped by charge, each group kept in canonical index order
  std::map<std::pair<int, int>, std::vector<const Field::Term*>> groups;
  for (const auto& t : y.terms()) {
    const auto& m = table.at(t.index);
    groups[{m.charge_z(), m.charge_w()}].push_back(&t);
  }
  Complex sum = 0.0;
  for (const auto& s : x.terms()) {
    const auto& m = table.at(s.index);
    auto it = groups.find({-m.charge_z(), -m.charge_w()});
    if (it == groups.end()) continue;
    Complex partial = 0.0;
    for (const auto* t : it->second) {
      const auto& n = table.at(t->index);
      partial += t->value * moment(m.a + n.a, m.b + n.b);
    }
    sum += s.value * partial;
  }
  return sum * volume();
}

Complex inner(const Field& x, const Field& y) { return integrate_product(x, y.conj()); }

double rms(const Field& x) { return std::sqrt(std::max(0.0, inner(x, x).real()) / volume()); }

double max_abs(const Field& x, std::span<const Point> points) {
  double m = 0.0;
  for (const auto& p : points) m = std::max(m, std::abs(x.evaluate(p)));
  return m;
}

Field exp_series(const Field& h, int order, int max_degree) {
  Field sum = Field::constant(1.0);
  Field power = Field::constant(1.0);
  for (int k = 1; k <= order; ++k) {
    power = multiply_truncated(power, h, max_degree) * (1.0 / k);
    sum += power;
  }
  return sum;
}

std::vector<Point> random_points(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Point> points;
  points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double x[4];
    double r = 0.0;
    for (auto& v : x) {
      v = normal(rng);
      r += v * v;
    }
    r = std::sqrt(r);
    points.push_back({Complex(x[0] / r, x[1] / r), Complex(x[2] / r, x[3] / r)});
  }
  return points;
}

Field random_field(int max_degree, std::uint64_t seed, bool real_valued) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  const auto n = MonomialTable::instance().dim(max_degree);
  std::vector<Field::Term> terms;
  terms.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const double re = uniform(rng);
    const double im = uniform(rng);
    terms.push_back({i, Complex(re, im)});
  }
  auto f = Field::from_terms(std::move(terms));
  return real_valued ? f.real_part() : f;
}

Quadrature sphere_quadrature(int degree) {
  const int n_phase = degree + 1;
  const int n_t = degree / 4 + 1;
  Quadrature q;
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n_t));
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i < n_t; ++i) {
    double t = 0.0, wt = 0.0;
    gsl_integration_glfixed_point(0.0, 1.0, static_cast<std::size_t>(i), &t, &wt, table);
    const double rz = std::sqrt(1.0 - t);
    const double rw = std::sqrt(t);
    for (int j = 0; j < n_phase; ++j)
      for (int k = 0; k < n_phase; ++k) {
        const double a1 = two_pi * j / n_phase;
        const double a2 = two_pi * k / n_phase;
        q.points.push_back({std::polar(rz, a1), std::polar(rw, a2)});
        q.weights.push_back(volume() * wt / (static_cast<double>(n_phase) * n_phase));
      }
  }
  gsl_integration_glfixed_table_free(table);
  return q;
}

Projection project(std::span<const Point> points, std::span<const Complex> values, int max_degree,
                   std::span<const double> weights, double condition_limit) {
  const auto& table = MonomialTable::instance();
  const auto n = table.dim(max_degree);
  if (points.size() != values.size()) throw Error("project: points and values differ in length");
  if (points.size() < n) throw IllConditioned("project: fewer samples than basis functions");
  const auto rows = static_cast<Eigen::Index>(points.size());
  const auto cols = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd design(rows, cols);
  Eigen::VectorXcd rhs(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double wr = weights.empty() ? 1.0 : weights[static_cast<std::size_t>(r)];
    const double sw = std::sqrt(wr);
    for (Eigen::Index c = 0; c < cols; ++c) {
      design(r, c) = sw * Field::monomial(table.at(static_cast<std::uint32_t>(c))).evaluate(points[r]);
    }
    rhs(r) = sw * values[static_cast<std::size_t>(r)];
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  if (!(cond <= condition_limit)) {
    std::ostringstream msg;
    msg << "project: condition number " << cond << " exceeds " << condition_limit;
    throw IllConditioned(msg.str());
  }
  const Eigen::VectorXcd coeffs = svd.solve(rhs);
  const double res2 = (design * coeffs - rhs).squaredNorm();
  std::vector<Field::Term> terms;
  for (Eigen::Index c = 0; c < cols; ++c) terms.push_back({static_cast<std::uint32_t>(c), coeffs(c)});
  return {Field::from_terms(std::move(terms)), std::sqrt(res2), cond};
}

// ---------------------------------------------------------------------------
// Workspace

Workspace::Workspace(int cap, std::uint64_t seed) : cap_(cap) {
  if (cap < 0 || 2 * cap > kMaxDegree) throw CapExceeded("workspace cap out of range");
  const auto& table = MonomialTable::instance();
  const auto n = table.dim(cap);
  for (std::uint32_t i = 0; i < n; ++i) basis_.push_back(table.at(i));
  gram_.assign(n * n, Complex(0.0));
  std::map<std::pair<int, int>, std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < n; ++i) blocks[{basis_[i].charge_z(), basis_[i].charge_w()}].push_back(i);
  double lo = INFINITY, hi = 0.0;
  for (const auto& [charge, members] : blocks) {
    const auto m = static_cast<Eigen::Index>(members.size());
    Eigen::MatrixXcd g(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) {
        const auto v = inner(Field::monomial(basis_[members[i]]), Field::monomial(basis_[members[j]]));
        g(i, j) = v;
        gram_[members[i] * n + members[j]] = v;
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
    lo = std::min(lo, es.eigenvalues()(0));
    hi = std::max(hi, es.eigenvalues()(m - 1));
  }
  gram_min_eig_ = lo;
  gram_cond_ = hi / lo;
  if (!(lo > 0.0)) throw IllConditioned("Gram matrix is not positive definite");
  quadrature_ = sphere_quadrature(2 * cap);
  samples_ = random_points(50, seed);
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json to_json(const Field& x) {
  const auto& table = MonomialTable::instance();
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : x.terms()) {
    const auto& m = table.at(t.index);
    terms.push_back({m.a, m.b, m.c, m.d, t.value.real(), t.value.imag()});
  }
  return {{"terms", terms}};
}

Field field_from_json(const nlohmann::json& j) {
  Field f;
  for (const auto& t : j.at("terms")) {
    const Monomial m{t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>(), t.at(3).get<int>()};
    f += Field::monomial(m, Complex(t.at(4).get<double>(), t.at(5).get<double>()));
  }
  return f;
}

std::string to_string(const Field& x) {
  if (x.is_zero()) return "0";
  const auto& table = MonomialTable::instance();
  std::ostringstream out;
  bool first = true;
  for (const auto& t : x.terms()) {
    const auto& m = table.at(t.index);
    if (!first) out << " + ";
    first = false;
    out << "(" << t.value.real() << (t.value.imag() < 0 ? "" : "+") << t.value.imag() << "i)";
    const char* names[] = {"z", "w", "zb", "wb"};
    const int exps[] = {m.a, m.b, m.c, m.d};
    for (int k = 0; k < 4; ++k) {
      if (exps[k] == 1) out << names[k];
      if (exps[k] > 1) out << names[k] << "^" << exps[k];
    }
  }
  return out.str();
}

}  // namespace crlab
