#pragma once

// Root system A_n, its Coxeter element and Coxeter plane, soliton spectra of
// the polytopic models built on ∧^k of the standard representation, and
// compound (exterior power) matrices.

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "ttt/linalg.hpp"

namespace ttt::coxeter {

/// Integer vector in Z^{n+1} with respect to x_0, …, x_n.
using LatticeVector = std::vector<int>;

/// The root x_i − x_j.
struct Root {
  int i = 0;
  int j = 0;

  friend bool operator==(const Root&, const Root&) = default;
};

class RootSystemA {
 public:
  explicit RootSystemA(int n);

  int rank() const { return n_; }
  /// All n(n+1) roots ordered lexicographically by (i, j).
  const std::vector<Root>& roots() const { return roots_; }
  LatticeVector vector(const Root& r) const;
  /// Simple root α_i = x_{i−1} − x_i, i = 1..n.
  Root simple_root(int i) const;

 private:
  int n_;
  std::vector<Root> roots_;
};

int dot(const LatticeVector& a, const LatticeVector& b);

/// Reflection in the hyperplane orthogonal to a root (exact integer action).
LatticeVector reflect(const LatticeVector& v, const LatticeVector& root);

/// A Weyl group element of type A_n stored as the permutation x_i ↦ x_{perm[i]}.
struct CoxeterElement {
  int n = 0;
  std::vector<int> perm;

  LatticeVector apply(const LatticeVector& v) const;
  Root apply(const Root& r) const;
  /// Permutation matrix acting on R^{n+1}; orthogonal, preserves Σ x_i = 0.
  Eigen::MatrixXd matrix() const;
  /// Smallest p ≥ 1 with c^p = 1.
  int order() const;
};

/// r_{α_1} ⋯ r_{α_n}, composed from the simple reflections. It sends
/// x_i ↦ x_{i+1 mod n+1}.
CoxeterElement coxeter_element(int n);

struct ProjectedRoot {
  Root label;
  std::array<double, 2> point{};
  int orbit = 0;       // index of the Coxeter orbit (0-based)
  double angle = 0.0;  // atan2 of the projected point
};

struct CoxeterProjection {
  int n = 0;
  /// Orthonormal basis of the plane inside R^{n+1}.
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  std::vector<ProjectedRoot> roots;
  int orbit_count = 0;

  std::array<double, 2> project(const Eigen::VectorXd& x) const;
};

/// Projection onto the plane spanned by Re ζ and Im ζ for the eigenvector ζ
/// of the Coxeter element with eigenvalue exp(2πi/(n+1)) and ζ_0 = 1. The
/// basis is oriented so that the Coxeter element acts as a counterclockwise
/// rotation by 2π/(n+1). Throws DegeneratePlane for n = 1.
CoxeterProjection coxeter_plane(int n);

/// 2 sin(dπ/(n+1)) for the roots x_i − x_j with |i − j| = d.
double soliton_mass(int n, int d);

struct SolitonPair {
  int from = 0;  // index into weights
  int to = 0;    // index into weights, from < to
  Root root;     // weights[from] − weights[to] = x_i − x_j
  double mass = 0.0;
  int orbit = 0;     // Coxeter orbit of `root` (0-based; orbit d−1 holds j − i ≡ d)
  int particle = 0;  // min(d, n+1−d): orbit up to sign, equal to the mass class
};

struct SolitonSpectrum {
  int n = 0;
  int k = 0;
  /// Weights of ∧^k C^{n+1}: 0/1 vectors with k ones (x_{i_1} + ⋯ + x_{i_k}).
  std::vector<LatticeVector> weights;
  std::vector<SolitonPair> pairs;

  /// Number of solitons with the given particle class d (1 ≤ d ≤ (n+1)/2).
  int count(int particle) const;
};

SolitonSpectrum soliton_spectrum(int n, int k);

/// k-subsets of {0, …, size−1} in lexicographic order.
std::vector<std::vector<int>> k_subsets(int size, int k);

/// ∧^k M: entry (I, J) is the minor of M on rows I and columns J, with I and
/// J ranging over k-subsets in lexicographic order.
Eigen::MatrixXcd wedge_matrix(const Eigen::MatrixXcd& m, int k);

}  // namespace ttt::coxeter
