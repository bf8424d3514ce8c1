#pragma once

// Higgs-field fixed points of the (n+1, N) models, their dominant weights
// and levels, and the effective central charge.
//
// Weights live in the trace-zero hyperplane of Q^{n+1} with the Euclidean
// inner product ⟨x_i, x_j⟩ = δ_ij. Everything here is exact.

#include <vector>

#include "ttt/rational.hpp"

namespace ttt::minimal {

using WeightVector = std::vector<Rational>;

struct FixedPointData {
  int n = 0;
  int N = 0;
  std::vector<int> k;  // k_0..k_n, all ≥ 0
  int k_sum = 0;       // Σ k_i, coprime to N
};

/// Checks k_i ≥ 0, n + 1 + Σ k_i = N and gcd(Σ k_i, N) = 1.
FixedPointData validate_fixed_point(int n, int N, const std::vector<int>& k);

/// Every valid tuple for the given n and N > n + 1, lexicographically
/// descending in (k_0, k_1, …).
std::vector<FixedPointData> enumerate_fixed_points(int n, int N);

/// Basic weight ε_j (1 ≤ j ≤ n), dual to the simple roots x_{i−1} − x_i.
WeightVector basic_weight(int n, int j);
WeightVector weyl_vector(int n);
Rational inner(const WeightVector& a, const WeightVector& b);

/// Λ = Σ_{i=1}^{n} k_i ε_i with a level bound.
struct DominantWeight {
  int n = 0;
  std::vector<int> coefficients;  // k_1..k_n
  int level_bound = 0;

  int level() const;  // Σ coefficients
  WeightVector coordinates() const;
};

/// Weight of a fixed point; k_0 is dropped and the level bound is Σ k_i.
DominantWeight dominant_weight(const FixedPointData& f);

/// (N/(n+1))(m + ρ) == ρ + Σ_{i≥1} k_i ε_i for the m solving the k → m relation.
bool weight_identity_holds(const FixedPointData& f);

struct CentralCharge {
  Rational via_weight;  // n − 12((n+1)/N)|Λ − (k/(n+1))ρ|²
  Rational via_m;       // n − 12(N/(n+1))|m|²
  double value() const { return to_double(via_m); }
};

/// Both formulas; throws IdentityViolation if they differ.
CentralCharge ceff(const FixedPointData& f);

struct AlcoveReport {
  int n = 0;
  int l = 0;
  /// P_l + ρ as ε-coefficient vectors.
  std::vector<std::vector<int>> shifted_level_weights;
  /// Dominant weights strictly inside (l + n + 1)Å, found by brute force.
  std::vector<std::vector<int>> interior_points;
  std::vector<std::vector<int>> only_shifted;
  std::vector<std::vector<int>> only_interior;

  bool equal() const { return only_shifted.empty() && only_interior.empty(); }
};

AlcoveReport alcove_identity_check(int n, int l);

}  // namespace ttt::minimal
