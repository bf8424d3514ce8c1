#include "ttt/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ttt {

namespace {

bool is_upper_hessenberg(const Eigen::MatrixXcd& a) {
  for (Eigen::Index i = 2; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j + 1 < i; ++j)
      if (a(i, j) != Complex(0.0)) return false;
  return true;
}

// p_k = det(λI − H_k) for the leading k×k block, as coefficient vectors.
std::vector<Complex> hyman(const Eigen::MatrixXcd& h) {
  const auto d = static_cast<std::size_t>(h.rows());
  std::vector<std::vector<Complex>> p(d + 1);
  p[0] = {Complex(1.0)};
  for (std::size_t k = 1; k <= d; ++k) {
    const auto kk = static_cast<Eigen::Index>(k - 1);
    std::vector<Complex> next(k + 1, Complex(0.0));
    // (λ − h_kk) p_{k−1}
    for (std::size_t j = 0; j < p[k - 1].size(); ++j) {
      next[j + 1] += p[k - 1][j];
      next[j] -= h(kk, kk) * p[k - 1][j];
    }
    // − Σ_{i<k} h_{ik} (Π_{l=i+1}^{k} h_{l,l−1}) p_{i−1}
    Complex sub(1.0);
    for (std::size_t i = k - 1; i >= 1; --i) {
      const auto ii = static_cast<Eigen::Index>(i - 1);
      sub *= h(ii + 1, ii);
      const Complex factor = h(ii, kk) * sub;
      if (factor != Complex(0.0))
        for (std::size_t j = 0; j < p[i - 1].size(); ++j) next[j] -= factor * p[i - 1][j];
    }
    p[k] = std::move(next);
  }
  return p[d];
}

}  // namespace

std::vector<Complex> characteristic_polynomial(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("characteristic_polynomial: matrix must be square");
  if (a.rows() == 0) return {Complex(1.0)};
  if (is_upper_hessenberg(a)) return hyman(a);
  Eigen::HessenbergDecomposition<Eigen::MatrixXcd> hd(a);
  Eigen::MatrixXcd h = hd.matrixH();
  return hyman(h);
}

double hausdorff_distance(std::span<const Complex> a, std::span<const Complex> b) {
  auto one_sided = [](std::span<const Complex> x, std::span<const Complex> y) {
    double worst = 0.0;
    for (const auto& p : x) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : y) best = std::min(best, std::abs(p - q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

std::vector<Complex> elementary_symmetric(std::span<const Complex> values) {
  // Coefficients of Π (1 + x_j t).
  std::vector<Complex> e(values.size() + 1, Complex(0.0));
  e[0] = 1.0;
  for (std::size_t j = 0; j < values.size(); ++j)
    for (std::size_t i = j + 1; i >= 1; --i) e[i] += values[j] * e[i - 1];
  return e;
}

}  // namespace ttt
