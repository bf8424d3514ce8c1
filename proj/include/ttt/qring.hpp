#pragma once

// Small quantum cohomology of CP^n, its quantum differential equation and
// Givental's J-function.

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "ttt/linalg.hpp"
#include "ttt/rational.hpp"

namespace ttt::qring {

/// Element Σ_{j=0}^{n} c_j b^j of C[b]/(b^{n+1}).
class TruncatedClass {
 public:
  explicit TruncatedClass(int n);
  TruncatedClass(int n, std::vector<Complex> coeffs);

  static TruncatedClass one(int n);
  static TruncatedClass generator(int n);  // b

  int dimension() const { return n_; }
  const std::vector<Complex>& coefficients() const { return c_; }
  Complex operator[](int j) const { return c_[static_cast<std::size_t>(j)]; }

  TruncatedClass& operator+=(const TruncatedClass& other);
  TruncatedClass& operator-=(const TruncatedClass& other);
  TruncatedClass& operator*=(const TruncatedClass& other);
  TruncatedClass& operator*=(Complex scalar);

  /// Max of coefficient moduli.
  double norm() const;

 private:
  int n_;
  std::vector<Complex> c_;
};

TruncatedClass operator+(TruncatedClass a, const TruncatedClass& b);
TruncatedClass operator-(TruncatedClass a, const TruncatedClass& b);
TruncatedClass operator*(TruncatedClass a, const TruncatedClass& b);
TruncatedClass operator*(TruncatedClass a, Complex s);
TruncatedClass operator*(Complex s, TruncatedClass a);

/// exp(a) = e^{a_0} Σ_m N^m/m! with N the nilpotent part of a.
TruncatedClass exp(const TruncatedClass& a);

/// Multiplicative inverse; requires a nonzero constant term.
TruncatedClass inverse(const TruncatedClass& a);

/// a^p for integer p ≥ 0.
TruncatedClass pow(const TruncatedClass& a, int p);

/// H*(CP^n) with the deformed product b^{n+1} = q.
class QuantumRing {
 public:
  QuantumRing(int n, Complex q) : n_(n), q_(q) {}

  int dimension() const { return n_; }
  Complex q() const { return q_; }

  TruncatedClass multiply(const TruncatedClass& a, const TruncatedClass& b) const;

 private:
  int n_;
  Complex q_;
};

/// b^j reduced with b^{n+1} = q, i.e. q^{⌊j/(n+1)⌋} b^{j mod (n+1)}.
TruncatedClass quantum_reduce(int n, int j, Complex q);

/// Matrix of quantum multiplication by b in the basis 1, b, …, b^n.
Eigen::MatrixXcd chiral_matrix(int n, Complex q);

struct JFunction {
  int n = 1;
  Complex hbar{1.0, 0.0};
  int K = 25;      // series truncation order
  int branch = 0;  // log q = Log q + 2πi·branch
};

/// J(q) = q^{b/ħ} Σ_{k=0}^{K} q^k / Π_{j=1}^{k} (b + jħ)^{n+1}.
TruncatedClass j_evaluate(const JFunction& jf, Complex q);

/// ‖(ħ∂)^{n+1} J − qJ‖ with ∂ = q d/dq applied exactly to every q^{k+b/ħ}.
double qde_residual(const JFunction& jf, Complex q);

/// Rigorous upper bound for the truncation tail that qde_residual measures.
///
/// The residual of the truncated series is exactly the first omitted term
/// q^{b/ħ} q^{K+1} / Π_{j=1}^{K} (b + jħ)^{n+1}. In the ℓ¹ coefficient norm
/// (which dominates the max norm and is submultiplicative),
///   ‖q^{b/ħ}‖ ≤ exp(|log q| / |ħ|),
///   ‖(b + jħ)^{-1}‖ ≤ (j|ħ|)^{-1} Σ_{m=0}^{n} (j|ħ|)^{-m},
/// so the bound is |q|^{K+1} e^{|log q|/|ħ|} Π_j [(j|ħ|)^{-1} P_j]^{n+1} with
/// P_j = Σ_{m=0}^{n} (j|ħ|)^{-m}. For |ħ| = 1 this is
/// |q|^{K+1} / (K!)^{n+1} times the polynomial-growth factor Π_j P_j^{n+1}
/// (P_j → 1 as j grows).
double qde_tail_bound(const JFunction& jf, Complex q);

/// One monomial c·q^{q_power}·ħ^{hbar_power} of an operator coefficient.
struct OperatorTerm {
  int q_power = 0;
  int hbar_power = 0;
  Rational coefficient{0};
};

/// Σ_j P_j(q, ħ) (ħ∂)^j with polynomial coefficients P_j; the leading
/// coefficient is the constant 1 unless the operator is zero.
class QDEOperator {
 public:
  QDEOperator() = default;  // zero operator
  explicit QDEOperator(std::vector<std::vector<OperatorTerm>> coefficients);

  /// Highest power of ħ∂, or -1 for the zero operator.
  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<std::vector<OperatorTerm>>& coefficients() const { return coeffs_; }

  /// Coefficients with ħ substituted: result[j][a] multiplies q^a (ħ∂)^j.
  std::vector<std::vector<Complex>> at_hbar(Complex hbar) const;

  /// Image of the monomial q^e as pairs (shift s, c) meaning c·q^{e+s}.
  std::vector<std::pair<int, Complex>> apply_to_monomial(Complex hbar, Complex exponent) const;

 private:
  std::vector<std::vector<OperatorTerm>> coeffs_;
};

/// (ħ∂)^{n+1} − q.
QDEOperator cpn_operator(int n);

/// (ħ∂)^4 − 27q(ħ∂)^2 − 27ħq(ħ∂) − 6ħ²q, the cubic threefold in CP^4.
QDEOperator cubic_hypersurface_operator();

/// Polynomial in b and q with exact coefficients, keyed by (b power, q power).
using BQPolynomial = std::map<std::pair<int, int>, Rational>;

/// Replace ħ∂ by b, then set ħ = 0. Zero coefficients are dropped.
BQPolynomial semiclassical_symbol(const QDEOperator& op);

/// Γ(1+b)^{n+1} in C[b]/(b^{n+1}) (n+1 Chern roots equal to b).
TruncatedClass gamma_class(int n);

}  // namespace ttt::qring
