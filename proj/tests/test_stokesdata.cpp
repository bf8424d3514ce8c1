#include <doctest.h>

#include <functional>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "ttt/errors.hpp"
#include "ttt/linalg.hpp"
#include "ttt/stokesdata.hpp"

using namespace ttt;
using namespace ttt::stokes;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Complex> expected_exponentials(const AsymptoticData& a) {
  std::vector<Complex> x;
  for (int j = 0; j <= a.n; ++j)
    x.push_back(std::polar(1.0, (a.n - 2 * j - a.gamma[static_cast<std::size_t>(j)]) * kPi / (a.n + 1)));
  return x;
}

}  // namespace

TEST_SUITE("stokesdata") {
  TEST_CASE("validate_gamma") {
    CHECK_NOTHROW(validate_gamma(2, std::vector<double>{2, 0, -2}));
    CHECK_NOTHROW(validate_gamma(1, std::vector<double>{0, 0}));
    try {
      validate_gamma(1, std::vector<double>{3, -3});
      FAIL("expected a slope violation");
    } catch (const ConstraintViolation& e) {
      CHECK(e.kind() == ConstraintKind::Slope);
    }
    CHECK_THROWS_AS(validate_gamma(2, std::vector<double>{1, 0, 0}), ConstraintViolation);
    CHECK_THROWS_AS(validate_gamma(2, std::vector<double>{1, 0}), ConstraintViolation);
    // cyclic wall: γ_0 ≥ −1 for n = 1
    CHECK_THROWS_AS(validate_gamma(1, std::vector<double>{-1.5, 1.5}), ConstraintViolation);
    CHECK_NOTHROW(validate_gamma(1, std::vector<double>{-1, 1}));
    // antisymmetry within tolerance is snapped
    const auto a = validate_gamma(1, std::vector<double>{0.5 + 1e-13, -0.5});
    CHECK(a.gamma[0] + a.gamma[1] == 0.0);
    // exact input
    CHECK_NOTHROW(validate_gamma(2, std::vector<Rational>{Rational(2, 3), Rational(0), Rational(-2, 3)}));
    CHECK_THROWS_AS(validate_gamma(2, std::vector<Rational>{Rational(2, 3), Rational(0), Rational(-1, 3)}),
                    ConstraintViolation);
  }

  TEST_CASE("binomial Stokes data") {
    for (int n = 1; n <= 10; ++n) {
      const auto s = stokes_from_gamma(cpn_gamma(n));
      for (int k = 1; k <= n; ++k) CHECK(std::abs(s(k) - static_cast<double>(oracle::binomial(n + 1, k))) < 1e-9);
    }
  }

  TEST_CASE("n = 1 closed form") {
    CHECK(std::abs(stokes_from_gamma(validate_gamma(1, std::vector<double>{0, 0}))(1)) < 1e-15);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      const double g = u(rng);
      const auto s = stokes_from_gamma(validate_gamma(1, std::vector<double>{g, -g}));
      CHECK(std::abs(s(1) - 2.0 * std::sin(kPi * g / 2.0)) < 1e-12);
    }
  }

  TEST_CASE("Stokes data are real and palindromic") {
    std::mt19937_64 rng(2);
    for (int n = 1; n <= 8; ++n)
      for (int t = 0; t < 50; ++t) {
        const auto a = validate_gamma(n, oracle::random_admissible_gamma(n, rng));
        const auto s = stokes_from_gamma(a);
        for (int k = 1; k <= n; ++k) CHECK(std::abs(s(k) - s(n + 1 - k)) < 1e-12);
        // e_k of the exponentials directly
        const auto e = elementary_symmetric(expected_exponentials(a));
        for (int k = 1; k <= n; ++k) {
          CHECK(std::abs(e[static_cast<std::size_t>(k)].imag()) < 1e-12);
          CHECK(std::abs(e[static_cast<std::size_t>(k)].real() - s(k)) < 1e-12);
        }
      }
  }

  TEST_CASE("gamma <-> m") {
    const auto m = gamma_to_m(cpn_gamma(3));
    const auto rho = weyl_vector(3);
    for (std::size_t i = 0; i < m.size(); ++i) CHECK(m[i] == doctest::Approx(-rho[i]));
    for (double x : gamma_to_m(validate_gamma(2, std::vector<double>{0, 0, 0}))) CHECK(x == 0.0);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
      const int n = 1 + t % 6;
      const auto a = validate_gamma(n, oracle::random_admissible_gamma(n, rng));
      const auto back = m_to_gamma(n, gamma_to_m(a));
      for (int i = 0; i <= n; ++i)
        CHECK(back.gamma[static_cast<std::size_t>(i)] == doctest::Approx(a.gamma[static_cast<std::size_t>(i)]).epsilon(1e-14));
    }
  }

  TEST_CASE("Higgs exponents to m") {
    const auto m = higgs_to_m(validate_higgs(1, 5, std::vector<int>{1, 2}));
    CHECK(m == std::vector<Rational>{Rational(1, 10), Rational(-1, 10)});
    for (int n = 1; n <= 6; ++n)
      for (int k0 = -1; k0 <= 3; ++k0) {
        std::vector<int> k(static_cast<std::size_t>(n) + 1, -1);
        k[0] = k0;
        const int N = n + 1 + k0 - n;
        if (N < 1) continue;
        const auto mm = higgs_to_m(validate_higgs(n, N, k));
        const auto rho = weyl_vector(n);
        for (int i = 0; i <= n; ++i) CHECK(to_double(mm[static_cast<std::size_t>(i)]) == doctest::Approx(-rho[static_cast<std::size_t>(i)]));
      }
    CHECK_THROWS_AS(validate_higgs(2, 6, std::vector<int>{0, 2, 1}), ConstraintViolation);  // not symmetric
    CHECK_THROWS_AS(validate_higgs(1, 5, std::vector<int>{-2, 4}), ConstraintViolation);
    CHECK_THROWS_AS(validate_higgs(1, 6, std::vector<int>{1, 2}), ConstraintViolation);
  }

  TEST_CASE("Higgs data give admissible asymptotic data") {
    // every valid h with small N: closure holds and m_to_gamma accepts the result
    for (int n = 1; n <= 5; ++n)
      for (int N = 1; N <= 14; ++N) {
        const int total = N - n - 1;
        // enumerate symmetric k with k_i ≥ −1
        std::vector<int> k(static_cast<std::size_t>(n) + 1, -1);
        const int half = (n + 1) / 2;  // free entries k_1..k_half, mirrored
        std::function<void(int)> walk = [&](int pos) {
          if (pos > half) {
            for (int i = 1; i <= n; ++i) k[static_cast<std::size_t>(i)] = k[static_cast<std::size_t>(std::min(i, n + 1 - i))];
            int s = 0;
            for (int i = 1; i <= n; ++i) s += k[static_cast<std::size_t>(i)];
            k[0] = total - s;
            if (k[0] < -1) return;
            const auto h = validate_higgs(n, N, k);
            const auto m = to_double(std::span<const Rational>(higgs_to_m(h)));
            CHECK(satisfies_wall_inequalities(m));
            CHECK_NOTHROW(m_to_gamma(n, m));
            return;
          }
          for (int v = -1; v <= total + n; ++v) {
            k[static_cast<std::size_t>(pos)] = v;
            walk(pos + 1);
          }
        };
        walk(1);
      }
  }

  TEST_CASE("inline-gamma convention differs by the factor 2") {
    const auto h = validate_higgs(1, 5, std::vector<int>{1, 2});
    const auto a = higgs_to_m(h, HiggsConvention::MandK);
    const auto b = higgs_to_m(h, HiggsConvention::InlineGamma);
    CHECK(a != b);
  }

  TEST_CASE("t_from_q") {
    const auto h0 = validate_higgs(2, 3, std::vector<int>{0, 0, 0});
    const Complex q(0.3, 1.7);
    CHECK(std::abs(t_from_q(h0, q) - q) < 1e-14);
    CHECK(std::abs(t_from_q(validate_higgs(1, 2, std::vector<int>{0, 0}), 4.0) - 4.0) < 1e-14);
    const auto h = validate_higgs(1, 5, std::vector<int>{1, 2});
    const Complex expected = t_from_q(h, q) * std::polar(1.0, 2.0 * kPi * 5.0 / 2.0);
    CHECK(std::abs(t_from_q(h, q, 1) - expected) < 1e-12);
  }

  TEST_CASE("Steinberg matrix") {
    for (int n = 1; n <= 6; ++n) {
      const auto M = steinberg_matrix(stokes_from_gamma(cpn_gamma(n)));
      CHECK(std::abs(M.entries.determinant() - 1.0) < 1e-9);
      // unipotent: (M − 1)^{n+1} = 0
      const Eigen::MatrixXcd N = M.entries - Eigen::MatrixXcd::Identity(n + 1, n + 1);
      Eigen::MatrixXcd p = N;
      for (int i = 0; i < n; ++i) p = p * N;
      CHECK(p.norm() < 1e-6);
    }
    const auto M1 = steinberg_matrix(StokesParameters{1, {0.0}});
    const std::vector<Complex> pm_i{Complex(0, 1), Complex(0, -1)};
    const auto ev = M1.eigenvalues();
    CHECK(hausdorff_distance(std::vector<Complex>(ev.data(), ev.data() + ev.size()), pm_i) < 1e-12);
  }

  TEST_CASE("characteristic polynomial round trip and eigenvalue identity") {
    std::mt19937_64 rng(4);
    for (int n = 1; n <= 6; ++n)
      for (int t = 0; t < 30; ++t) {
        const auto a = validate_gamma(n, oracle::random_admissible_gamma(n, rng));
        const auto s = stokes_from_gamma(a);
        const auto M = steinberg_matrix(s);
        const auto back = M.stokes_from_characteristic_polynomial();
        for (int k = 1; k <= n; ++k) CHECK(std::abs(back[static_cast<std::size_t>(k - 1)] - s(k)) < 1e-12 * (1 + std::abs(s(k))));
        const auto ev = M.eigenvalues();
        const std::vector<Complex> got(ev.data(), ev.data() + ev.size());
        CHECK(hausdorff_distance(got, expected_exponentials(a)) < 1e-8);
        // same multiset written as exp(2πi(m + ρ)/(n+1))
        const auto p = alcove_point(a.m());
        std::vector<Complex> via_alcove;
        for (double x : p) via_alcove.push_back(std::polar(1.0, 2.0 * kPi * x));
        CHECK(hausdorff_distance(got, via_alcove) < 1e-8);
      }
  }

  TEST_CASE("alcove point") {
    for (int n = 1; n <= 5; ++n) {
      const auto rho = weyl_vector(n);
      std::vector<double> minus_rho;
      for (double r : rho) minus_rho.push_back(-r);
      for (double x : alcove_point(minus_rho)) CHECK(std::abs(x) < 1e-15);
      const auto p0 = alcove_point(std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
      for (std::size_t i = 0; i < p0.size(); ++i) CHECK(p0[i] == doctest::Approx(rho[i] / (n + 1)));
    }
  }

  TEST_CASE("wall inequalities iff alcove membership (sampling)") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int n = 1; n <= 4; ++n) {
      int inside = 0;
      for (int t = 0; t < 4000; ++t) {
        std::vector<double> m(static_cast<std::size_t>(n) + 1);
        double mean = 0.0;
        for (auto& x : m) mean += (x = u(rng));
        mean /= static_cast<double>(m.size());
        for (auto& x : m) x -= mean;
        const bool walls = satisfies_wall_inequalities(m);
        CHECK(walls == in_fundamental_alcove(alcove_point(m)));
        inside += walls;
      }
      CHECK(inside > 0);
    }
  }
}
