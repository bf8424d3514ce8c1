#pragma once

// Radial tt*-Toda equations
//   (1/2)(w_i'' + w_i'/r) = −e^{2(w_{i+1}−w_i)} + e^{2(w_i−w_{i−1})},  w_i + w_{n−i} = 0,
// solved as a two-point boundary-value problem on [ε, R], and extraction of
// the Stokes parameters from the exponential tail.

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "ttt/stokesdata.hpp"

namespace ttt::toda {

/// Strictly increasing radii r_0 = ε < r_1 < ⋯ < r_{M−1} = R with ε > 0.
class RadialGrid {
 public:
  explicit RadialGrid(std::vector<double> nodes);

  /// Geometric spacing on [ε, 1], uniform on [1, R], with the two step sizes
  /// matched at r = 1 so the spacing varies smoothly.
  static RadialGrid log_uniform(double epsilon, double outer, std::size_t nodes);

  /// Inserts a node inside every interval (2M − 1 nodes), placed by cubic
  /// interpolation in the node index.
  RadialGrid refined() const;
  /// Keeps nodes 0, 2, 4, … and always the last node.
  RadialGrid coarsened() const;

  double epsilon() const { return r_.front(); }
  double outer() const { return r_.back(); }
  std::size_t size() const { return r_.size(); }
  double operator[](std::size_t i) const { return r_[i]; }
  std::span<const double> nodes() const { return r_; }

 private:
  std::vector<double> r_;
};

/// Values w_i(r_j): row i is the component, column j the node.
using Field = Eigen::MatrixXd;

/// Residual (1/2)(w_i'' + w_i'/r) + e^{2(w_{i+1}−w_i)} − e^{2(w_i−w_{i−1})} at the
/// interior nodes, with second-order central differences on the (possibly
/// nonuniform) grid and cyclic indices. Column j belongs to node j + 1.
Eigen::MatrixXd radial_residual(int n, const RadialGrid& grid, const Field& w);

/// L_k = 2 sin(kπ/(n+1)).
double decay_rate(int n, int k);

struct SolverOptions {
  double epsilon = 1e-3;
  /// Outer radius; a nonpositive value selects 12 / L_1.
  double outer_radius = 0.0;
  std::size_t nodes = 2000;
  /// Bound on the max r²-weighted residual (r² capped at 1) and on the
  /// boundary-condition residuals.
  double tol = 1e-9;
  int max_iterations = 80;
  /// Solve again on the every-other-node grid and compare.
  bool richardson_check = true;
  /// Allowed max |w_fine − w_coarse|/(1 + |w_fine|) on shared nodes;
  /// nonpositive means 10·tol.
  double richardson_tol = 1e-2;
  /// Continuation ramp m(λ) = λm used when direct Newton fails and always
  /// on the boundary of the admissible region.
  int continuation_steps = 10;
  /// ε used instead of `epsilon` when the data lies on a wall of the alcove.
  double boundary_epsilon = 1e-6;
};

struct RadialSolution {
  int n = 0;
  RadialGrid grid{std::vector<double>{1.0, 2.0}};
  Field w;
  stokes::AsymptoticData data;
  int iterations = 0;
  double residual = 0.0;
  bool boundary_case = false;
  bool used_continuation = false;
  /// Coarse/fine discrepancy, when the Richardson check ran.
  std::optional<double> richardson_discrepancy;
};

/// Newton/collocation solve with inner Robin condition r w_i'(ε) = −m_i, outer
/// Robin condition w_i'(R) + κ w_i(R) = 0 where κ is the logarithmic decay
/// rate of K_0(2L_1 r) at R, and antisymmetry built into the unknowns.
/// Throws NoConvergence or GridTooCoarse.
RadialSolution solve_global(const stokes::AsymptoticData& data, const SolverOptions& options = {});

/// Reference tail used for fitting s_k.
enum class TailModel {
  /// K_0(2x)/π: the exact decaying solution of the linearized system, with
  /// K_0(2x)/π ~ F(x) as x → ∞.
  Bessel,
  /// F(x) = (1/2)(πx)^{−1/2} e^{−2x}.
  Leading,
};

double tail_profile(double x, TailModel model);

/// −(4/(n+1)) Σ_{p=0}^{⌊(n−1)/2⌋} w_p(r) sin((2p+1)kπ/(n+1)) at every node.
std::vector<double> stokes_signal(const RadialSolution& sol, int k);

struct FitWindow {
  double r_min = 0.0;
  double r_max = 0.0;
};

/// Radii in [R/2, R] where F(L_k r) ∈ [1e−10, 1e−3]. When that is empty the
/// R/2 cut is dropped.
FitWindow default_window(const RadialSolution& sol, int k);

struct StokesFit {
  double s = 0.0;
  /// Standard deviation of signal/profile over the window, relative to |s|.
  double relative_spread = 0.0;
  FitWindow window;
  std::size_t samples = 0;
};

/// Weighted least-squares fit of the tail signal against s_k·profile(L_k r),
/// weights 1/profile² so every node counts equally in relative terms. An
/// identically zero solution gives s = 0; otherwise a window signal below
/// 1e−12 throws SignalBelowNoise.
StokesFit extract_stokes(const RadialSolution& sol, int k, std::optional<FitWindow> window = std::nullopt,
                         TailModel model = TailModel::Bessel);

struct RoundTrip {
  double numeric = 0.0;
  double exact = 0.0;
  std::optional<double> relative_error;
  StokesFit fit;
};

/// n = 1: solve for γ = (γ_0, −γ_0), extract s_1 and compare with 2 sin(πγ_0/2).
RoundTrip painleve3_roundtrip(double gamma0, const SolverOptions& options = {});

}  // namespace ttt::toda
