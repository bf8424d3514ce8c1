#pragma once

// Algebraic data of global tt*-Toda solutions and the conversions among
// asymptotic data (γ or m), Higgs exponents k, Stokes parameters s and the
// Steinberg cross-section M^(0).

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "ttt/errors.hpp"
#include "ttt/linalg.hpp"
#include "ttt/rational.hpp"

namespace ttt::stokes {

/// Tolerance on the linear (in)equalities when validating float input.
inline constexpr double kAdmissibilityTol = 1e-12;

/// Asymptotic data (γ_0, …, γ_n) at t = 0: 2w_i ~ γ_i log|t|.
///
/// Admissible when γ_{i+1} − γ_i ≥ −2 (i = 0..n−1), γ_0 − γ_n ≥ −2 (the
/// cyclic wall of the alcove; this is γ_0 ≥ −1 once antisymmetry holds) and
/// γ_i + γ_{n−i} = 0. Build instances through validate_gamma.
struct AsymptoticData {
  int n = 0;
  std::vector<double> gamma;

  /// m_i = −γ_i / 2.
  std::vector<double> m() const;
};

AsymptoticData validate_gamma(int n, std::span<const double> gamma);
AsymptoticData validate_gamma(int n, std::span<const Rational> gamma);

/// True when every wall inequality holds with at least the given margin.
bool is_strictly_admissible(const AsymptoticData& a, double margin = 1e-9);

/// γ = (n, n−2, …, −n), the quantum cohomology of CP^n.
AsymptoticData cpn_gamma(int n);

/// Real Stokes parameters s_1..s_n; s[k-1] holds s_k.
struct StokesParameters {
  int n = 0;
  std::vector<double> s;

  double operator()(int k) const { return s.at(static_cast<std::size_t>(k - 1)); }
};

/// x_j = exp((n − 2j − γ_j) πi / (n+1)), j = 0..n.
std::vector<Complex> stokes_exponentials(const AsymptoticData& a);

/// s_i = e_i(x_0, …, x_n). Throws ttt::Error if an imaginary part survives.
StokesParameters stokes_from_gamma(const AsymptoticData& a);

std::vector<double> gamma_to_m(const AsymptoticData& a);
AsymptoticData m_to_gamma(int n, std::span<const double> m);

/// Higgs exponents (k_0, …, k_n) at fixed N = n + 1 + Σ k_i.
struct HiggsExponents {
  int n = 0;
  int N = 0;
  std::vector<int> k;
};

/// Checks k_i ≥ −1, n + 1 + Σ k_i = N and k_i = k_{n−i+1} (i = 1..n).
HiggsExponents validate_higgs(int n, int N, std::span<const int> k);

enum class HiggsConvention {
  /// m_{i−1} − m_i + 1 = ((n+1)/N)(k_i + 1)
  MandK,
  /// γ_i − γ_{i−1} + 1 = ((n+1)/N)(k_i + 1), followed by m = −γ/2
  InlineGamma,
};

/// Solves the k → m relation for i = 1..n with the normalization Σ m_i = 0.
/// For symmetric k this is the same as m_i + m_{n−i} = 0. Checks the cyclic
/// closure (the i = 0 relation) exactly and throws InconsistentClosure if it
/// fails. No symmetry requirement on k.
std::vector<Rational> solve_mandk(int n, int N, std::span<const int> k);

std::vector<Rational> higgs_to_m(const HiggsExponents& h, HiggsConvention convention = HiggsConvention::MandK);

/// t = ((n+1)/N) q^{N/(n+1)} with log q = Log q + 2πi·branch.
Complex t_from_q(const HiggsExponents& h, Complex q, int branch = 0);

/// Companion-form element of SL_{n+1}C with characteristic polynomial
/// λ^{n+1} − s_1 λ^n + s_2 λ^{n−1} − ⋯ + (−1)^n s_n λ + (−1)^{n+1}.
///
/// Layout: ones on the subdiagonal and the negated polynomial coefficients
/// in the last column (row i holds −a_i for the coefficient a_i of λ^i), the
/// same shape as the chiral matrix C.
struct SteinbergMatrix {
  int n = 0;
  Eigen::MatrixXcd entries;

  /// Recovers (s_1, …, s_n) from the characteristic polynomial of entries.
  std::vector<Complex> stokes_from_characteristic_polynomial() const;
  Eigen::VectorXcd eigenvalues() const;
};

SteinbergMatrix steinberg_matrix(const StokesParameters& s);

/// ρ = (n/2, n/2 − 1, …, −n/2).
std::vector<double> weyl_vector(int n);

/// (m + ρ)/(n+1).
std::vector<double> alcove_point(std::span<const double> m);

/// Closed fundamental alcove in x-coordinates: p_0 ≥ p_1 ≥ ⋯ ≥ p_n and
/// p_0 − p_n ≤ 1 (Σ p_i = 0 is assumed, not checked).
bool in_fundamental_alcove(std::span<const double> p, double tol = kAdmissibilityTol);

/// The inequalities m_{i−1} − m_i + 1 ≥ 0 for all i, indices mod n+1.
bool satisfies_wall_inequalities(std::span<const double> m, double tol = kAdmissibilityTol);

}  // namespace ttt::stokes
