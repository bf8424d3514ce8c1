#include "ttt/qring.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ttt::qring {

namespace {

void require_same(const TruncatedClass& a, const TruncatedClass& b) {
  if (a.dimension() != b.dimension())
    throw std::invalid_argument("TruncatedClass: mismatched dimensions");
}

Complex branch_log(Complex q, int branch) {
  return std::log(q) + Complex(0.0, 2.0 * std::numbers::pi * branch);
}

// (b + c)^{-1} = c^{-1} Σ_m (−b/c)^m, c ≠ 0.
TruncatedClass shifted_generator_inverse(int n, Complex c) {
  std::vector<Complex> coeffs(static_cast<std::size_t>(n) + 1);
  Complex term = 1.0 / c;
  for (auto& x : coeffs) {
    x = term;
    term *= -1.0 / c;
  }
  return TruncatedClass(n, std::move(coeffs));
}

TruncatedClass shifted_generator(int n, Complex c) {
  TruncatedClass t = TruncatedClass::generator(n);
  return t + TruncatedClass::one(n) * c;
}

Complex ipow(Complex z, int p) {
  Complex r(1.0);
  for (int i = 0; i < p; ++i) r *= z;
  return r;
}

}  // namespace

TruncatedClass::TruncatedClass(int n) : n_(n), c_(static_cast<std::size_t>(n) + 1, Complex(0.0)) {
  if (n < 0) throw std::invalid_argument("TruncatedClass: n must be nonnegative");
}

TruncatedClass::TruncatedClass(int n, std::vector<Complex> coeffs) : n_(n), c_(std::move(coeffs)) {
  if (n < 0) throw std::invalid_argument("TruncatedClass: n must be nonnegative");
  if (c_.size() != static_cast<std::size_t>(n) + 1)
    throw std::invalid_argument("TruncatedClass: expected n+1 coefficients");
}

TruncatedClass TruncatedClass::one(int n) {
  TruncatedClass t(n);
  t.c_[0] = 1.0;
  return t;
}

TruncatedClass TruncatedClass::generator(int n) {
  TruncatedClass t(n);
  if (n >= 1) t.c_[1] = 1.0;
  return t;
}

TruncatedClass& TruncatedClass::operator+=(const TruncatedClass& other) {
  require_same(*this, other);
  for (std::size_t j = 0; j < c_.size(); ++j) c_[j] += other.c_[j];
  return *this;
}

TruncatedClass& TruncatedClass::operator-=(const TruncatedClass& other) {
  require_same(*this, other);
  for (std::size_t j = 0; j < c_.size(); ++j) c_[j] -= other.c_[j];
  return *this;
}

TruncatedClass& TruncatedClass::operator*=(const TruncatedClass& other) {
  require_same(*this, other);
  std::vector<Complex> out(c_.size(), Complex(0.0));
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; i + j < c_.size(); ++j) out[i + j] += c_[i] * other.c_[j];
  c_ = std::move(out);
  return *this;
}

TruncatedClass& TruncatedClass::operator*=(Complex scalar) {
  for (auto& x : c_) x *= scalar;
  return *this;
}

double TruncatedClass::norm() const {
  double m = 0.0;
  for (const auto& x : c_) m = std::max(m, std::abs(x));
  return m;
}

TruncatedClass operator+(TruncatedClass a, const TruncatedClass& b) { return a += b; }
TruncatedClass operator-(TruncatedClass a, const TruncatedClass& b) { return a -= b; }
TruncatedClass operator*(TruncatedClass a, const TruncatedClass& b) { return a *= b; }
TruncatedClass operator*(TruncatedClass a, Complex s) { return a *= s; }
TruncatedClass operator*(Complex s, TruncatedClass a) { return a *= s; }

TruncatedClass exp(const TruncatedClass& a) {
  const int n = a.dimension();
  auto nil = a.coefficients();
  const Complex c0 = nil[0];
  nil[0] = 0.0;
  const TruncatedClass nilpotent(n, std::move(nil));
  TruncatedClass sum = TruncatedClass::one(n);
  TruncatedClass term = TruncatedClass::one(n);
  for (int m = 1; m <= n; ++m) {
    term *= nilpotent;
    term *= Complex(1.0 / m);
    sum += term;
  }
  return sum * std::exp(c0);
}

TruncatedClass inverse(const TruncatedClass& a) {
  const Complex c0 = a[0];
  if (c0 == Complex(0.0)) throw std::domain_error("TruncatedClass: constant term is zero");
  const int n = a.dimension();
  // a = c0 (1 + N) with N nilpotent.
  auto nil = a.coefficients();
  for (auto& x : nil) x /= c0;
  nil[0] = 0.0;
  const TruncatedClass nilpotent(n, std::move(nil));
  TruncatedClass sum = TruncatedClass::one(n);
  TruncatedClass term = TruncatedClass::one(n);
  for (int m = 1; m <= n; ++m) {
    term *= nilpotent;
    term *= Complex(-1.0);
    sum += term;
  }
  return sum * (1.0 / c0);
}

TruncatedClass pow(const TruncatedClass& a, int p) {
  if (p < 0) throw std::invalid_argument("pow: negative exponent");
  TruncatedClass r = TruncatedClass::one(a.dimension());
  for (int i = 0; i < p; ++i) r *= a;
  return r;
}

TruncatedClass QuantumRing::multiply(const TruncatedClass& a, const TruncatedClass& b) const {
  if (a.dimension() != n_ || b.dimension() != n_)
    throw std::invalid_argument("QuantumRing: mismatched dimensions");
  const auto size = static_cast<std::size_t>(n_) + 1;
  std::vector<Complex> out(size, Complex(0.0));
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j) {
      const std::size_t d = i + j;
      if (d < size)
        out[d] += a.coefficients()[i] * b.coefficients()[j];
      else
        out[d - size] += q_ * a.coefficients()[i] * b.coefficients()[j];
    }
  return TruncatedClass(n_, std::move(out));
}

TruncatedClass quantum_reduce(int n, int j, Complex q) {
  if (n < 0) throw std::invalid_argument("quantum_reduce: n must be nonnegative");
  if (j < 0) throw std::invalid_argument("quantum_reduce: exponent must be nonnegative");
  const int block = n + 1;
  std::vector<Complex> c(static_cast<std::size_t>(block), Complex(0.0));
  c[static_cast<std::size_t>(j % block)] = ipow(q, j / block);
  return TruncatedClass(n, std::move(c));
}

Eigen::MatrixXcd chiral_matrix(int n, Complex q) {
  if (n < 0) throw std::invalid_argument("chiral_matrix: n must be nonnegative");
  const Eigen::Index size = n + 1;
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(size, size);
  for (Eigen::Index i = 1; i < size; ++i) c(i, i - 1) = 1.0;
  c(0, size - 1) += q;
  return c;
}

namespace {

void check_jfunction(const JFunction& jf) {
  if (jf.n < 0) throw std::invalid_argument("JFunction: n must be nonnegative");
  if (jf.K < 0) throw std::invalid_argument("JFunction: K must be nonnegative");
  if (jf.hbar == Complex(0.0)) throw std::invalid_argument("JFunction: hbar must be nonzero");
}

// Series terms T_k = Π_{j=1}^{k} (b + jħ)^{-(n+1)}, k = 0..K.
std::vector<TruncatedClass> series_terms(const JFunction& jf) {
  std::vector<TruncatedClass> terms;
  terms.reserve(static_cast<std::size_t>(jf.K) + 1);
  terms.push_back(TruncatedClass::one(jf.n));
  for (int k = 1; k <= jf.K; ++k) {
    const TruncatedClass factor = pow(shifted_generator_inverse(jf.n, Complex(k) * jf.hbar), jf.n + 1);
    terms.push_back(terms.back() * factor);
  }
  return terms;
}

TruncatedClass frobenius_prefactor(const JFunction& jf, Complex q) {
  // q^{b/ħ} = exp((log q / ħ) b)
  return exp(TruncatedClass::generator(jf.n) * (branch_log(q, jf.branch) / jf.hbar));
}

}  // namespace

TruncatedClass j_evaluate(const JFunction& jf, Complex q) {
  check_jfunction(jf);
  if (q == Complex(0.0)) throw std::invalid_argument("j_evaluate: q must be nonzero");
  const auto terms = series_terms(jf);
  TruncatedClass sum(jf.n);
  Complex qk(1.0);
  for (const auto& t : terms) {
    sum += t * qk;
    qk *= q;
  }
  return frobenius_prefactor(jf, q) * sum;
}

double qde_residual(const JFunction& jf, Complex q) {
  check_jfunction(jf);
  if (q == Complex(0.0)) throw std::invalid_argument("qde_residual: q must be nonzero");
  const auto terms = series_terms(jf);
  // ħ∂ (q^{k + b/ħ} T_k) = (b + kħ) q^{k + b/ħ} T_k
  TruncatedClass lhs(jf.n);
  TruncatedClass rhs(jf.n);
  Complex qk(1.0);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const TruncatedClass weight = pow(shifted_generator(jf.n, Complex(static_cast<double>(k)) * jf.hbar), jf.n + 1);
    lhs += weight * terms[k] * qk;
    rhs += terms[k] * (qk * q);
    qk *= q;
  }
  const TruncatedClass prefactor = frobenius_prefactor(jf, q);
  return (prefactor * lhs - prefactor * rhs).norm();
}

double qde_tail_bound(const JFunction& jf, Complex q) {
  check_jfunction(jf);
  const double h = std::abs(jf.hbar);
  double bound = std::pow(std::abs(q), jf.K + 1) * std::exp(std::abs(branch_log(q, jf.branch)) / h);
  for (int j = 1; j <= jf.K; ++j) {
    const double inv = 1.0 / (j * h);
    double poly = 0.0;
    double term = 1.0;
    for (int m = 0; m <= jf.n; ++m) {
      poly += term;
      term *= inv;
    }
    bound *= std::pow(inv * poly, jf.n + 1);
  }
  return bound;
}

QDEOperator::QDEOperator(std::vector<std::vector<OperatorTerm>> coefficients) : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) return;
  const auto& lead = coeffs_.back();
  Rational constant{0};
  for (const auto& t : lead) {
    if (t.q_power == 0 && t.hbar_power == 0)
      constant += t.coefficient;
    else if (t.coefficient != 0)
      throw std::invalid_argument("QDEOperator: leading coefficient must be the constant 1");
  }
  if (constant != 1) throw std::invalid_argument("QDEOperator: leading coefficient must be the constant 1");
  for (const auto& c : coeffs_)
    for (const auto& t : c)
      if (t.q_power < 0 || t.hbar_power < 0) throw std::invalid_argument("QDEOperator: negative power");
}

std::vector<std::vector<Complex>> QDEOperator::at_hbar(Complex hbar) const {
  std::vector<std::vector<Complex>> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) {
    int top = 0;
    for (const auto& t : c) top = std::max(top, t.q_power);
    std::vector<Complex> poly(static_cast<std::size_t>(top) + 1, Complex(0.0));
    for (const auto& t : c) poly[static_cast<std::size_t>(t.q_power)] += to_double(t.coefficient) * ipow(hbar, t.hbar_power);
    out.push_back(std::move(poly));
  }
  return out;
}

std::vector<std::pair<int, Complex>> QDEOperator::apply_to_monomial(Complex hbar, Complex exponent) const {
  // (ħ∂)^j q^e = (ħe)^j q^e
  std::map<int, Complex> image;
  const auto coeffs = at_hbar(hbar);
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    const Complex eigen = ipow(hbar * exponent, static_cast<int>(j));
    for (std::size_t a = 0; a < coeffs[j].size(); ++a)
      if (coeffs[j][a] != Complex(0.0)) image[static_cast<int>(a)] += coeffs[j][a] * eigen;
  }
  return {image.begin(), image.end()};
}

QDEOperator cpn_operator(int n) {
  if (n < 0) throw std::invalid_argument("cpn_operator: n must be nonnegative");
  std::vector<std::vector<OperatorTerm>> c(static_cast<std::size_t>(n) + 2);
  c[0].push_back({1, 0, Rational(-1)});
  c.back().push_back({0, 0, Rational(1)});
  return QDEOperator(std::move(c));
}

QDEOperator cubic_hypersurface_operator() {
  std::vector<std::vector<OperatorTerm>> c(5);
  c[0].push_back({1, 2, Rational(-6)});
  c[1].push_back({1, 1, Rational(-27)});
  c[2].push_back({1, 0, Rational(-27)});
  c[4].push_back({0, 0, Rational(1)});
  return QDEOperator(std::move(c));
}

BQPolynomial semiclassical_symbol(const QDEOperator& op) {
  BQPolynomial symbol;
  const auto& coeffs = op.coefficients();
  for (std::size_t j = 0; j < coeffs.size(); ++j)
    for (const auto& t : coeffs[j])
      if (t.hbar_power == 0) symbol[{static_cast<int>(j), t.q_power}] += t.coefficient;
  std::erase_if(symbol, [](const auto& kv) { return kv.second == 0; });
  return symbol;
}

TruncatedClass gamma_class(int n) {
  if (n < 0) throw std::invalid_argument("gamma_class: n must be nonnegative");
  // log Γ(1+x) = −γ_E x + Σ_{k≥2} (−1)^k ζ(k) x^k / k
  std::vector<Complex> log_gamma(static_cast<std::size_t>(n) + 1, Complex(0.0));
  if (n >= 1) log_gamma[1] = -std::numbers::egamma;
  for (int k = 2; k <= n; ++k)
    log_gamma[static_cast<std::size_t>(k)] = ((k % 2 == 0) ? 1.0 : -1.0) * std::riemann_zeta(static_cast<double>(k)) / k;
  TruncatedClass roots(n, std::move(log_gamma));
  return exp(roots * Complex(static_cast<double>(n + 1)));
}

}  // namespace ttt::qring
