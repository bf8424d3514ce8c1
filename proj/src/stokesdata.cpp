#include "ttt/stokesdata.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace ttt::stokes {

namespace {

void require_rank(int n) {
  if (n < 1) throw ConstraintViolation(0, ConstraintKind::Range, "rank n must be at least 1");
}

void require_length(int n, std::size_t size) {
  if (size != static_cast<std::size_t>(n) + 1)
    throw ConstraintViolation(size, ConstraintKind::Length,
                              "expected " + std::to_string(n + 1) + " entries, got " + std::to_string(size));
}

template <typename T, typename Less>
void check_walls(int n, std::span<const T> g, Less below) {
  const auto nn = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < nn; ++i)
    if (below(g[i + 1] - g[i]))
      throw ConstraintViolation(i, ConstraintKind::Slope, "gamma_{i+1} - gamma_i < -2");
  if (below(g[0] - g[nn]))
    throw ConstraintViolation(nn, ConstraintKind::CyclicSlope, "gamma_0 - gamma_n < -2");
}

}  // namespace

std::vector<double> AsymptoticData::m() const { return gamma_to_m(*this); }

AsymptoticData validate_gamma(int n, std::span<const double> gamma) {
  require_rank(n);
  require_length(n, gamma.size());
  const auto nn = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i <= nn; ++i)
    if (!std::isfinite(gamma[i])) throw ConstraintViolation(i, ConstraintKind::Range, "non-finite entry");
  check_walls<double>(n, gamma, [](double d) { return d < -2.0 - kAdmissibilityTol; });
  for (std::size_t i = 0; i <= nn / 2; ++i)
    if (std::abs(gamma[i] + gamma[nn - i]) > kAdmissibilityTol)
      throw ConstraintViolation(i, ConstraintKind::Antisymmetry, "gamma_i + gamma_{n-i} != 0");
  // Snap to exact antisymmetry so downstream symmetry checks see clean input.
  AsymptoticData a{n, std::vector<double>(gamma.begin(), gamma.end())};
  for (std::size_t i = 0; i <= nn / 2; ++i) {
    const double v = 0.5 * (a.gamma[i] - a.gamma[nn - i]);
    a.gamma[i] = v;
    a.gamma[nn - i] = -v;
  }
  return a;
}

AsymptoticData validate_gamma(int n, std::span<const Rational> gamma) {
  require_rank(n);
  require_length(n, gamma.size());
  const auto nn = static_cast<std::size_t>(n);
  check_walls<Rational>(n, gamma, [](const Rational& d) { return d < Rational(-2); });
  for (std::size_t i = 0; i <= nn / 2; ++i)
    if (gamma[i] + gamma[nn - i] != 0)
      throw ConstraintViolation(i, ConstraintKind::Antisymmetry, "gamma_i + gamma_{n-i} != 0");
  return AsymptoticData{n, to_double(gamma)};
}

bool is_strictly_admissible(const AsymptoticData& a, double margin) {
  const auto nn = static_cast<std::size_t>(a.n);
  for (std::size_t i = 0; i < nn; ++i)
    if (a.gamma[i + 1] - a.gamma[i] + 2.0 < margin) return false;
  return a.gamma[0] - a.gamma[nn] + 2.0 >= margin;
}

AsymptoticData cpn_gamma(int n) {
  require_rank(n);
  std::vector<double> g;
  for (int j = 0; j <= n; ++j) g.push_back(static_cast<double>(n - 2 * j));
  return validate_gamma(n, g);
}

std::vector<Complex> stokes_exponentials(const AsymptoticData& a) {
  std::vector<Complex> x;
  x.reserve(a.gamma.size());
  for (int j = 0; j <= a.n; ++j) {
    const double phase = (a.n - 2 * j - a.gamma[static_cast<std::size_t>(j)]) * std::numbers::pi / (a.n + 1);
    x.push_back(std::polar(1.0, phase));
  }
  return x;
}

StokesParameters stokes_from_gamma(const AsymptoticData& a) {
  using LComplex = std::complex<long double>;
  // Extended precision keeps the conjugate-pair cancellation clean for n up to ~20.
  std::vector<LComplex> e(static_cast<std::size_t>(a.n) + 2, LComplex(0.0L));
  e[0] = 1.0L;
  for (int j = 0; j <= a.n; ++j) {
    const long double phase = (static_cast<long double>(a.n - 2 * j) - a.gamma[static_cast<std::size_t>(j)]) *
                              std::numbers::pi_v<long double> / (a.n + 1);
    const LComplex x(std::cos(phase), std::sin(phase));
    for (auto i = static_cast<std::size_t>(j) + 1; i >= 1; --i) e[i] += x * e[i - 1];
  }
  StokesParameters s{a.n, {}};
  for (int i = 1; i <= a.n; ++i) {
    const auto& v = e[static_cast<std::size_t>(i)];
    if (std::abs(static_cast<double>(v.imag())) >= 1e-12)
      throw Error("stokes_from_gamma: non-real symmetric function at index " + std::to_string(i));
    s.s.push_back(static_cast<double>(v.real()));
  }
  return s;
}

std::vector<double> gamma_to_m(const AsymptoticData& a) {
  std::vector<double> m;
  m.reserve(a.gamma.size());
  for (double g : a.gamma) m.push_back(-0.5 * g);
  return m;
}

AsymptoticData m_to_gamma(int n, std::span<const double> m) {
  std::vector<double> g;
  g.reserve(m.size());
  for (double v : m) g.push_back(-2.0 * v);
  return validate_gamma(n, g);
}

HiggsExponents validate_higgs(int n, int N, std::span<const int> k) {
  require_rank(n);
  require_length(n, k.size());
  if (N <= 0) throw ConstraintViolation(0, ConstraintKind::Range, "N must be positive");
  for (std::size_t i = 0; i < k.size(); ++i)
    if (k[i] < -1) throw ConstraintViolation(i, ConstraintKind::Range, "k_i < -1");
  const int total = n + 1 + std::accumulate(k.begin(), k.end(), 0);
  if (total != N)
    throw ConstraintViolation(0, ConstraintKind::Normalization,
                              "n + 1 + sum k_i = " + std::to_string(total) + " != N = " + std::to_string(N));
  for (int i = 1; i <= n; ++i)
    if (k[static_cast<std::size_t>(i)] != k[static_cast<std::size_t>(n - i + 1)])
      throw ConstraintViolation(static_cast<std::size_t>(i), ConstraintKind::Symmetry, "k_i != k_{n-i+1}");
  return HiggsExponents{n, N, std::vector<int>(k.begin(), k.end())};
}

namespace {

// Consecutive differences d_i = ((n+1)/N)(k_i + 1) − 1 for i = 0..n.
std::vector<Rational> scaled_differences(int n, int N, std::span<const int> k) {
  std::vector<Rational> d;
  d.reserve(k.size());
  for (int ki : k) d.push_back(Rational(n + 1, N) * Rational(ki + 1) - 1);
  return d;
}

// Solves v_{i−1} − v_i = d_i (i = 1..n) with Σ v_i = 0.
std::vector<Rational> integrate_differences(int n, std::span<const Rational> d) {
  std::vector<Rational> partial(static_cast<std::size_t>(n) + 1, Rational(0));
  for (std::size_t i = 1; i < partial.size(); ++i) partial[i] = partial[i - 1] + d[i];
  Rational mean(0);
  for (const auto& p : partial) mean += p;
  mean /= n + 1;
  std::vector<Rational> v;
  v.reserve(partial.size());
  for (const auto& p : partial) v.push_back(mean - p);
  return v;
}

void check_closure(int n, int N, std::span<const int> k, std::span<const Rational> m) {
  const auto nn = static_cast<std::size_t>(n);
  // Σ_{i=0}^{n} (m_{i−1} − m_i + 1) telescopes to n+1; it must equal
  // ((n+1)/N) Σ (k_i + 1), and the i = 0 relation must hold on its own.
  Rational lhs(0);
  Rational rhs(0);
  for (std::size_t i = 0; i <= nn; ++i) {
    const Rational prev = m[(i + nn) % (nn + 1)];
    lhs += prev - m[i] + 1;
    rhs += Rational(n + 1, N) * Rational(k[i] + 1);
  }
  const Rational wrap = m[nn] - m[0] + 1;
  const Rational wrap_expected = Rational(n + 1, N) * Rational(k[0] + 1);
  if (lhs != rhs || lhs != Rational(n + 1) || wrap != wrap_expected)
    throw InconsistentClosure("cyclic closure of the k -> m relation fails: " + to_string(lhs) + " vs " +
                              to_string(rhs));
}

}  // namespace

std::vector<Rational> solve_mandk(int n, int N, std::span<const int> k) {
  require_rank(n);
  require_length(n, k.size());
  if (N <= 0) throw ConstraintViolation(0, ConstraintKind::Range, "N must be positive");
  const auto d = scaled_differences(n, N, k);
  auto m = integrate_differences(n, d);
  check_closure(n, N, k, m);
  return m;
}

std::vector<Rational> higgs_to_m(const HiggsExponents& h, HiggsConvention convention) {
  const auto valid = validate_higgs(h.n, h.N, h.k);
  if (convention == HiggsConvention::MandK) return solve_mandk(valid.n, valid.N, valid.k);

  // γ_i − γ_{i−1} = d_i, i.e. −γ plays the role of m in the difference relation.
  const auto d = scaled_differences(valid.n, valid.N, valid.k);
  auto neg_gamma = integrate_differences(valid.n, d);
  std::vector<Rational> m;
  m.reserve(neg_gamma.size());
  for (const auto& v : neg_gamma) m.push_back(v / 2);
  return m;
}

Complex t_from_q(const HiggsExponents& h, Complex q, int branch) {
  if (q == Complex(0.0)) throw ConstraintViolation(0, ConstraintKind::Range, "q must be nonzero");
  if (h.N <= 0) throw ConstraintViolation(0, ConstraintKind::Range, "N must be positive");
  const double exponent = static_cast<double>(h.N) / (h.n + 1);
  const Complex log_q = std::log(q) + Complex(0.0, 2.0 * std::numbers::pi * branch);
  return (static_cast<double>(h.n + 1) / h.N) * std::exp(exponent * log_q);
}

SteinbergMatrix steinberg_matrix(const StokesParameters& s) {
  require_rank(s.n);
  if (s.s.size() != static_cast<std::size_t>(s.n))
    throw ConstraintViolation(s.s.size(), ConstraintKind::Length, "expected n Stokes parameters");
  const Eigen::Index size = s.n + 1;
  // s_0 = s_{n+1} = 1; a_j = (−1)^{n+1−j} s_{n+1−j} multiplies λ^j.
  auto full_s = [&](int i) { return (i == 0 || i == s.n + 1) ? 1.0 : s.s[static_cast<std::size_t>(i - 1)]; };
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(size, size);
  for (Eigen::Index i = 1; i < size; ++i) m(i, i - 1) = 1.0;
  for (int j = 0; j <= s.n; ++j) {
    const int i = s.n + 1 - j;
    const double a = ((i % 2 == 0) ? 1.0 : -1.0) * full_s(i);
    m(j, size - 1) = -a;
  }
  return SteinbergMatrix{s.n, std::move(m)};
}

std::vector<Complex> SteinbergMatrix::stokes_from_characteristic_polynomial() const {
  const auto c = characteristic_polynomial(entries);
  std::vector<Complex> s;
  for (int i = 1; i <= n; ++i)
    s.push_back(((i % 2 == 0) ? 1.0 : -1.0) * c[static_cast<std::size_t>(n + 1 - i)]);
  return s;
}

Eigen::VectorXcd SteinbergMatrix::eigenvalues() const {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(entries, false);
  return solver.eigenvalues();
}

std::vector<double> weyl_vector(int n) {
  std::vector<double> rho;
  for (int i = 0; i <= n; ++i) rho.push_back(0.5 * n - i);
  return rho;
}

std::vector<double> alcove_point(std::span<const double> m) {
  if (m.empty()) throw ConstraintViolation(0, ConstraintKind::Length, "empty m");
  const int n = static_cast<int>(m.size()) - 1;
  double sum = 0.0;
  for (double v : m) sum += v;
  if (std::abs(sum) > 1e-9) throw ConstraintViolation(0, ConstraintKind::Normalization, "sum of m_i must vanish");
  const auto rho = weyl_vector(n);
  std::vector<double> p;
  for (std::size_t i = 0; i < m.size(); ++i) p.push_back((m[i] + rho[i]) / (n + 1));
  return p;
}

bool in_fundamental_alcove(std::span<const double> p, double tol) {
  if (p.empty()) return false;
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i - 1] - p[i] < -tol) return false;
  return p.front() - p.back() <= 1.0 + tol;
}

bool satisfies_wall_inequalities(std::span<const double> m, double tol) {
  const std::size_t size = m.size();
  for (std::size_t i = 0; i < size; ++i)
    if (m[(i + size - 1) % size] - m[i] + 1.0 < -tol) return false;
  return true;
}

}  // namespace ttt::stokes
