#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "ttt/linalg.hpp"
#include "ttt/qring.hpp"

using namespace ttt;
using namespace ttt::qring;

namespace {

TruncatedClass random_class(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<Complex> c;
  for (int i = 0; i <= n; ++i) c.emplace_back(g(rng), g(rng));
  return TruncatedClass(n, c);
}

double distance(const TruncatedClass& a, const std::vector<Complex>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) d = std::max(d, std::abs(a.coefficients()[i] - b[i]));
  return d;
}

// Product in C[b]/(b^{n+1} − q) by long multiplication followed by folding
// every b^j (j > n) down with b^{n+1} = q.
std::vector<Complex> folded_product(const TruncatedClass& a, const TruncatedClass& b, Complex q) {
  const int n = a.dimension();
  std::vector<Complex> full(static_cast<std::size_t>(2 * n + 1), Complex(0.0));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) full[static_cast<std::size_t>(i + j)] += a[i] * b[j];
  for (int j = 2 * n; j > n; --j) full[static_cast<std::size_t>(j - n - 1)] += q * full[static_cast<std::size_t>(j)];
  full.resize(static_cast<std::size_t>(n) + 1);
  return full;
}

}  // namespace

TEST_SUITE("qring") {
  TEST_CASE("truncated arithmetic drops powers above n") {
    const auto b = TruncatedClass::generator(2);
    const auto b3 = b * b * b;
    CHECK(b3.norm() == 0.0);
    const auto b2 = b * b;
    CHECK(b2[2] == Complex(1.0));
    CHECK((TruncatedClass::one(2) * b)[1] == Complex(1.0));
  }

  TEST_CASE("multiplication is associative and commutative") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 1 + trial % 6;
      const auto x = random_class(n, rng), y = random_class(n, rng), z = random_class(n, rng);
      CHECK(((x * y) * z - x * (y * z)).norm() < 1e-12 * (1 + x.norm() * y.norm() * z.norm()));
      CHECK((x * y - y * x).norm() < 1e-12);
    }
  }

  TEST_CASE("inverse, exp and pow") {
    std::mt19937_64 rng(5);
    for (int n = 0; n <= 5; ++n) {
      auto x = random_class(n, rng);
      x += TruncatedClass::one(n) * Complex(3.0);
      CHECK((x * inverse(x) - TruncatedClass::one(n)).norm() < 1e-12);
      auto y = random_class(n, rng);
      std::vector<Complex> nil = y.coefficients();
      nil[0] = 0.0;
      const TruncatedClass t(n, nil);
      CHECK((exp(t) * exp(t * Complex(-1.0)) - TruncatedClass::one(n)).norm() < 1e-12);
      CHECK((pow(x, 3) - x * x * x).norm() < 1e-10);
    }
  }

  TEST_CASE("quantum_reduce") {
    const auto a = quantum_reduce(2, 3, 5.0);
    CHECK(a[0] == Complex(5.0));
    CHECK(a[1] == Complex(0.0));
    const auto b = quantum_reduce(2, 2, 7.0);
    CHECK(b[2] == Complex(1.0));
    CHECK(b[0] == Complex(0.0));
    const auto c = quantum_reduce(3, 9, 2.0);
    CHECK(c[1] == Complex(4.0));
    CHECK(c[0] == Complex(0.0));
    // q = 0 is ordinary cohomology
    for (int j = 0; j < 8; ++j) CHECK((quantum_reduce(3, j, 0.0).norm() == 0.0) == (j > 3));
  }

  TEST_CASE("quantum product agrees with long multiplication") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 1 + trial % 5;
      const Complex q(0.3 * trial - 10.0, 0.7);
      const QuantumRing ring(n, q);
      const auto x = random_class(n, rng), y = random_class(n, rng);
      CHECK(distance(ring.multiply(x, y), folded_product(x, y, q)) < 1e-10);
    }
    // q = 0 gives the truncated product
    std::mt19937_64 rng2(4);
    const auto x = random_class(3, rng2), y = random_class(3, rng2);
    CHECK((QuantumRing(3, 0.0).multiply(x, y) - x * y).norm() < 1e-14);
  }

  TEST_CASE("chiral matrix") {
    const Complex q(2.0, -1.0);
    const auto m = chiral_matrix(2, q);
    Eigen::MatrixXcd expected(3, 3);
    expected << 0, 0, q, 1, 0, 0, 0, 1, 0;
    CHECK((m - expected).norm() == 0.0);
    const auto m0 = chiral_matrix(0, q);
    CHECK(m0.rows() == 1);
    CHECK(m0(0, 0) == q);
    for (int n = 1; n <= 6; ++n) {
      const auto c = chiral_matrix(n, q);
      Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(n + 1, n + 1);
      for (int i = 0; i <= n; ++i) p = p * c;
      CHECK((p - q * Eigen::MatrixXcd::Identity(n + 1, n + 1)).norm() < 1e-12);
      // det(λ − C) = λ^{n+1} − q
      const auto poly = characteristic_polynomial(c);
      CHECK(std::abs(poly[0] + q) < 1e-12);
      for (int j = 1; j <= n; ++j) CHECK(std::abs(poly[static_cast<std::size_t>(j)]) < 1e-12);
      CHECK(std::abs(poly[static_cast<std::size_t>(n) + 1] - 1.0) < 1e-12);
    }
  }

  TEST_CASE("J-function: constant term and hand expansion") {
    JFunction jf{1, 1.0, 0, 0};
    const auto j0 = j_evaluate(jf, 1.0);
    CHECK(j0[0] == Complex(1.0));
    CHECK(j0[1] == Complex(0.0));
    // 1 + 1/(1+b)^2 + 1/((1+b)^2(2+b)^2) = 9/4 − (11/4) b  mod b^2
    jf.K = 2;
    const auto j2 = j_evaluate(jf, 1.0);
    CHECK(std::abs(j2[0] - 2.25) < 1e-15);
    CHECK(std::abs(j2[1] + 2.75) < 1e-15);
  }

  TEST_CASE("J-function against the series oracle") {
    for (int n = 1; n <= 4; ++n)
      for (const Complex hbar : {Complex(1.0), Complex(2.0), Complex(0.5, 0.5)})
        for (const Complex q : {Complex(1.0), Complex(0.3, -0.8), Complex(-2.0, 0.1)}) {
          const JFunction jf{n, hbar, 20, 0};
          const auto ref = oracle::j_function(n, hbar, 20, q);
          CHECK(distance(j_evaluate(jf, q), ref) < 1e-11 * (1.0 + std::abs(ref[0])));
        }
  }

  TEST_CASE("branch offset multiplies by exp(2πi·branch·b/ħ)") {
    const Complex q(0.4, 0.9);
    JFunction a{2, 1.0, 15, 0};
    JFunction b = a;
    b.branch = 1;
    const auto shift = exp(TruncatedClass::generator(2) * Complex(0.0, 2.0 * std::numbers::pi));
    CHECK((j_evaluate(b, q) - shift * j_evaluate(a, q)).norm() < 1e-11);
  }

  TEST_CASE("QDE residual") {
    const JFunction jf{1, 1.0, 25, 0};
    CHECK(qde_residual(jf, 1.0) < 1e-10);
    CHECK(qde_residual(jf, 1.0) <= qde_tail_bound(jf, 1.0) + 1e-15);
    // K = 2 at q = 1: the residual is the first omitted term −1/((1+b)^2(2+b)^2) = −1/4 + (3/4) b
    const JFunction small{1, 1.0, 2, 0};
    CHECK(std::abs(qde_residual(small, 1.0) - 0.75) < 1e-14);
    // constant term at q → 0
    const JFunction flat{2, 2.0, 0, 0};
    CHECK(qde_residual(flat, 1e-12) < 1e-10);
  }

  TEST_CASE("QDE residual decays factorially and stays under the tail bound") {
    for (int n = 1; n <= 3; ++n)
      for (const Complex q : {Complex(1.0), Complex(0.0, 1.0), Complex(-0.6, 0.2)})
        for (int K = 0; K <= 10; ++K) {
          const JFunction a{n, 1.0, K, 0};
          const JFunction b{n, 1.0, K + 5, 0};
          const double ra = qde_residual(a, q);
          const double rb = qde_residual(b, q);
          CHECK(ra <= qde_tail_bound(a, q) * (1 + 1e-9) + 1e-15);
          // below ~1e-10 the ratio is swamped by roundoff in the class arithmetic
          if (ra > 1e-10) CHECK(rb < 1e-3 * ra);
        }
  }

  TEST_CASE("operator coefficients and symbols") {
    const auto cubic = cubic_hypersurface_operator();
    const auto at1 = cubic.at_hbar(1.0);
    REQUIRE(at1.size() == 5);
    CHECK(at1[0][1] == Complex(-6.0));
    CHECK(at1[1][1] == Complex(-27.0));
    CHECK(at1[2][1] == Complex(-27.0));
    CHECK(at1[4][0] == Complex(1.0));
    const auto at0 = cubic.at_hbar(0.0);
    CHECK(at0[0][1] == Complex(0.0));
    CHECK(at0[1][1] == Complex(0.0));
    CHECK(at0[2][1] == Complex(-27.0));

    const BQPolynomial cubic_symbol{{{4, 0}, Rational(1)}, {{2, 1}, Rational(-27)}};
    CHECK(semiclassical_symbol(cubic) == cubic_symbol);
    CHECK(semiclassical_symbol(QDEOperator()).empty());
    for (int n = 1; n <= 10; ++n) {
      const BQPolynomial expected{{{n + 1, 0}, Rational(1)}, {{0, 1}, Rational(-1)}};
      CHECK(semiclassical_symbol(cpn_operator(n)) == expected);
    }
  }

  TEST_CASE("CP^1 operator at ħ = 2, q = x² is the modified Bessel operator") {
    // With ∂ = q d/dq = (x/2) d/dx, (2∂)² − x² acting on x^e gives
    // e² x^e − x^{e+2}, which is x²(u'' + u'/x − u) for u = x^e.
    const auto op = cpn_operator(1);
    for (const double e : {0.0, 1.0, 2.5, -1.5}) {
      // q^{e/2} = x^e
      const auto image = op.apply_to_monomial(2.0, Complex(e / 2.0));
      std::map<int, Complex> by_x;
      for (const auto& [shift, c] : image) by_x[2 * shift] += c;
      // x²(u'' + u'/x − u) = (e(e−1) + e) x^e − x^{e+2}
      CHECK(std::abs(by_x[0] - e * e) < 1e-14);
      CHECK(std::abs(by_x[2] + 1.0) < 1e-14);
    }
  }

  TEST_CASE("gamma class against Γ(1+z)^{n+1}") {
    CHECK(gamma_class(0).norm() == doctest::Approx(1.0));
    const auto g1 = gamma_class(1);
    CHECK(std::abs(g1[1] + 2.0 * std::numbers::egamma) < 1e-14);
    const auto g2 = gamma_class(2);
    const double eg = std::numbers::egamma;
    CHECK(std::abs(g2[2] - (4.5 * eg * eg + 1.5 * std::numbers::pi * std::numbers::pi / 6.0)) < 1e-13);
    for (int n = 0; n <= 8; ++n) {
      const auto ref = oracle::taylor([n](oracle::C z) { return std::pow(oracle::gamma(1.0 + z), n + 1); }, n);
      CHECK(distance(gamma_class(n), ref) < 1e-11);
    }
  }
}
