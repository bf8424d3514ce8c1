#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "oracles.hpp"
#include "ttt/coxeter.hpp"
#include "ttt/errors.hpp"
#include "ttt/linalg.hpp"

using namespace ttt;
using namespace ttt::coxeter;

namespace {

Eigen::VectorXd as_vector(const LatticeVector& v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) x(static_cast<Eigen::Index>(i)) = v[i];
  return x;
}

std::array<double, 2> rotate(const std::array<double, 2>& p, double angle) {
  return {std::cos(angle) * p[0] - std::sin(angle) * p[1], std::sin(angle) * p[0] + std::cos(angle) * p[1]};
}

}  // namespace

TEST_SUITE("coxeter") {
  TEST_CASE("root system") {
    for (int n = 1; n <= 8; ++n) {
      const RootSystemA sys(n);
      CHECK(sys.roots().size() == static_cast<std::size_t>(n * (n + 1)));
      for (const auto& r : sys.roots()) CHECK(dot(sys.vector(r), sys.vector(r)) == 2);
    }
    CHECK(RootSystemA(2).simple_root(1) == Root{0, 1});
  }

  TEST_CASE("reflections are involutions preserving the form") {
    const RootSystemA sys(4);
    const LatticeVector v{3, -1, 0, 2, -4};
    for (const auto& r : sys.roots()) {
      const auto a = sys.vector(r);
      CHECK(reflect(reflect(v, a), a) == v);
      CHECK(dot(reflect(v, a), reflect(v, a)) == dot(v, v));
      // r_α(α) = −α
      auto neg = a;
      for (auto& x : neg) x = -x;
      CHECK(reflect(a, a) == neg);
    }
  }

  TEST_CASE("Coxeter element") {
    for (int n = 1; n <= 10; ++n) {
      const auto c = coxeter_element(n);
      CHECK(c.order() == n + 1);
      for (int i = 0; i <= n; ++i) CHECK(c.perm[static_cast<std::size_t>(i)] == (i + 1) % (n + 1));
      // c^{n+1} = 1 by composition
      LatticeVector v(static_cast<std::size_t>(n) + 1);
      for (int i = 0; i <= n; ++i) v[static_cast<std::size_t>(i)] = i * i - 3;
      LatticeVector w = v;
      for (int p = 0; p <= n; ++p) w = c.apply(w);
      CHECK(w == v);
      const Eigen::MatrixXd M = c.matrix();
      CHECK((M.transpose() * M - Eigen::MatrixXd::Identity(n + 1, n + 1)).norm() < 1e-15);
    }
    // n = 1: the sign flip on the trace-zero line
    const auto c1 = coxeter_element(1);
    CHECK(c1.apply(LatticeVector{1, -1}) == LatticeVector{-1, 1});
  }

  TEST_CASE("Coxeter plane: orbits, rotation, antipodes, radii") {
    CHECK_THROWS_AS(coxeter_plane(1), DegeneratePlane);
    for (int n = 2; n <= 8; ++n) {
      const auto p = coxeter_plane(n);
      const auto c = coxeter_element(n);
      const RootSystemA sys(n);
      CHECK(p.roots.size() == static_cast<std::size_t>(n * (n + 1)));
      CHECK(p.orbit_count == n);
      std::map<int, int> sizes;
      for (const auto& r : p.roots) ++sizes[r.orbit];
      for (const auto& [orbit, size] : sizes) CHECK(size == n + 1);
      CHECK(std::abs(p.u.norm() - 1.0) < 1e-12);
      CHECK(std::abs(p.v.norm() - 1.0) < 1e-12);
      CHECK(std::abs(p.u.dot(p.v)) < 1e-12);
      CHECK(std::abs(p.u.sum()) < 1e-12);
      CHECK(std::abs(p.v.sum()) < 1e-12);
      const double angle = 2.0 * std::numbers::pi / (n + 1);
      std::map<int, double> radius;
      for (const auto& r : sys.roots()) {
        const auto image = p.project(as_vector(sys.vector(c.apply(r))));
        const auto expected = rotate(p.project(as_vector(sys.vector(r))), angle);
        CHECK(std::hypot(image[0] - expected[0], image[1] - expected[1]) < 1e-10);
        const auto minus = p.project(as_vector(sys.vector(Root{r.j, r.i})));
        const auto plus = p.project(as_vector(sys.vector(r)));
        CHECK(std::hypot(minus[0] + plus[0], minus[1] + plus[1]) < 1e-12);
      }
      for (const auto& r : p.roots) {
        const double rad = std::hypot(r.point[0], r.point[1]);
        if (radius.contains(r.orbit))
          CHECK(std::abs(radius[r.orbit] - rad) < 1e-10);
        else
          radius[r.orbit] = rad;
      }
    }
  }

  TEST_CASE("mass formula symmetry") {
    for (int n = 1; n <= 9; ++n)
      for (int d = 1; d <= n; ++d) CHECK(std::abs(soliton_mass(n, d) - soliton_mass(n, n + 1 - d)) < 1e-14);
  }

  TEST_CASE("soliton spectra") {
    const auto s3 = soliton_spectrum(3, 1);
    CHECK(s3.count(1) == 4);
    CHECK(s3.count(2) == 2);
    for (const auto& p : s3.pairs) {
      if (p.particle == 1) CHECK(std::abs(p.mass - std::sqrt(2.0)) < 1e-14);
      if (p.particle == 2) CHECK(std::abs(p.mass - 2.0) < 1e-14);
    }
    const auto s1 = soliton_spectrum(1, 1);
    REQUIRE(s1.pairs.size() == 1);
    CHECK(std::abs(s1.pairs[0].mass - 2.0) < 1e-14);
    CHECK(soliton_spectrum(3, 2).weights.size() == 6);
  }

  TEST_CASE("soliton adjacency against brute force") {
    for (int n = 1; n <= 6; ++n)
      for (int k = 1; k <= n; ++k) {
        const auto spec = soliton_spectrum(n, k);
        CHECK(spec.weights.size() == static_cast<std::size_t>(oracle::binomial(n + 1, k)));
        // a pair is adjacent iff the difference has squared length 2 and entries in {−1, 0, 1}
        int brute = 0;
        for (std::size_t a = 0; a < spec.weights.size(); ++a)
          for (std::size_t b = a + 1; b < spec.weights.size(); ++b) {
            int sq = 0;
            for (std::size_t i = 0; i < spec.weights[a].size(); ++i) {
              const int d = spec.weights[a][i] - spec.weights[b][i];
              sq += d * d;
            }
            brute += sq == 2;
          }
        CHECK(static_cast<int>(spec.pairs.size()) == brute);
        // standard representation: n+1 per class d < (n+1)/2 and (n+1)/2 for the middle class
        if (k == 1)
          for (int d = 1; 2 * d <= n + 1; ++d) CHECK(spec.count(d) == (2 * d == n + 1 ? (n + 1) / 2 : n + 1));
      }
  }

  TEST_CASE("wedge matrices") {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
    d.diagonal() << 2.0, 3.0, 5.0;
    const auto w = wedge_matrix(d, 2);
    CHECK(std::abs(w(0, 0) - 6.0) < 1e-14);
    CHECK(std::abs(w(1, 1) - 10.0) < 1e-14);
    CHECK(std::abs(w(2, 2) - 15.0) < 1e-14);
    CHECK((w - w.diagonal().asDiagonal().toDenseMatrix()).norm() < 1e-14);
    for (int k = 1; k <= 4; ++k) {
      const auto I = wedge_matrix(Eigen::MatrixXcd::Identity(4, 4), k);
      CHECK((I - Eigen::MatrixXcd::Identity(I.rows(), I.cols())).norm() < 1e-14);
    }

    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    for (int t = 0; t < 10; ++t) {
      Eigen::MatrixXcd M(4, 4);
      for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 4; ++j) M(i, j) = Complex(g(rng), g(rng));
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M);
      const Eigen::VectorXcd lam = es.eigenvalues();
      for (int k = 1; k <= 4; ++k) {
        std::vector<Complex> products;
        for (const auto& sub : k_subsets(4, k)) {
          Complex p = 1.0;
          for (int i : sub) p *= lam(i);
          products.push_back(p);
        }
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ws(wedge_matrix(M, k));
        const Eigen::VectorXcd wl = ws.eigenvalues();
        CHECK(hausdorff_distance(std::vector<Complex>(wl.data(), wl.data() + wl.size()), products) < 1e-9);
      }
      // multiplicativity ∧^k(AB) = ∧^k A ∧^k B
      Eigen::MatrixXcd B = M.adjoint();
      CHECK((wedge_matrix(M * B, 2) - wedge_matrix(M, 2) * wedge_matrix(B, 2)).norm() < 1e-10);
    }

    // ∧^k of a unipotent matrix is unipotent
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(4, 4);
    U(0, 1) = 2.0;
    U(1, 3) = -1.5;
    U(2, 3) = 0.5;
    for (int k = 1; k <= 3; ++k) {
      const auto W = wedge_matrix(U, k);
      const auto poly = characteristic_polynomial(W);
      // (λ − 1)^d
      const int dsize = static_cast<int>(W.rows());
      for (int j = 0; j <= dsize; ++j) {
        const double expected = static_cast<double>(oracle::binomial(dsize, j)) * ((dsize - j) % 2 ? -1.0 : 1.0);
        CHECK(std::abs(poly[static_cast<std::size_t>(j)] - expected) < 1e-9);
      }
    }
  }
}
