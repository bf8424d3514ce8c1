#include "ttt/toda.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ttt/errors.hpp"

namespace ttt::toda {

namespace {

constexpr double kPi = std::numbers::pi;

// Coefficients of w_{j−1}, w_j, w_{j+1} in (1/2)(w'' + w'/r) at node j.
struct Stencil {
  double lo = 0.0;
  double mid = 0.0;
  double hi = 0.0;
};

Stencil radial_stencil(std::span<const double> r, std::size_t j) {
  const double hm = r[j] - r[j - 1];
  const double hp = r[j + 1] - r[j];
  const double denom = hm * hp * (hm + hp);
  const double d2lo = 2.0 * hp / denom;
  const double d2mid = -2.0 * (hm + hp) / denom;
  const double d2hi = 2.0 * hm / denom;
  const double d1lo = -hp * hp / denom;
  const double d1mid = (hp * hp - hm * hm) / denom;
  const double d1hi = hm * hm / denom;
  return {0.5 * (d2lo + d1lo / r[j]), 0.5 * (d2mid + d1mid / r[j]), 0.5 * (d2hi + d1hi / r[j])};
}

// One-sided second-order first derivative at an end node: coefficients of
// (w_end, w_next, w_nextnext) with h1, h2 the two adjacent spacings. The sign
// of the result is for the direction away from the end (flip for the right end).
std::array<double, 3> one_sided_derivative(double h1, double h2) {
  const double h = h1 + h2;
  return {-(2.0 * h1 + h2) / (h1 * h), h / (h1 * h2), -h1 / (h2 * h)};
}

// w_i = sign[i] · u[source[i]]; sign 0 marks the middle component for even n.
struct ComponentMap {
  int n = 0;
  int independent = 0;
  std::vector<int> source;
  std::vector<double> sign;

  explicit ComponentMap(int rank) : n(rank), independent((rank + 1) / 2) {
    for (int i = 0; i <= n; ++i) {
      if (i < independent) {
        source.push_back(i);
        sign.push_back(1.0);
      } else if (2 * i == n) {
        source.push_back(0);
        sign.push_back(0.0);
      } else {
        source.push_back(n - i);
        sign.push_back(-1.0);
      }
    }
  }

  int wrap(int i) const { return ((i % (n + 1)) + (n + 1)) % (n + 1); }

  // ∂w_i/∂u_q
  double d(int i, int q) const {
    const auto ii = static_cast<std::size_t>(wrap(i));
    return source[ii] == q ? sign[ii] : 0.0;
  }
};

class TodaSystem {
 public:
  TodaSystem(int n, const RadialGrid& grid, std::vector<double> m, double kappa)
      : map_(n), r_(grid.nodes().begin(), grid.nodes().end()), m_(std::move(m)), kappa_(kappa) {
    if (r_.size() < 4) throw ConstraintViolation(r_.size(), ConstraintKind::Length, "solver grid needs at least 4 nodes");
    const std::size_t count = r_.size();
    stencils_.resize(count);
    weights_.assign(count, 1.0);
    for (std::size_t j = 1; j + 1 < count; ++j) {
      stencils_[j] = radial_stencil(r_, j);
      weights_[j] = std::min(1.0, r_[j] * r_[j]);
    }
    inner_ = one_sided_derivative(r_[1] - r_[0], r_[2] - r_[1]);
    outer_ = one_sided_derivative(r_[count - 1] - r_[count - 2], r_[count - 2] - r_[count - 3]);
  }

  int independent() const { return map_.independent; }
  std::size_t nodes() const { return r_.size(); }
  Eigen::Index size() const { return static_cast<Eigen::Index>(nodes()) * map_.independent; }
  Eigen::Index index(std::size_t node, int p) const {
    return static_cast<Eigen::Index>(node) * map_.independent + p;
  }

  double w(const Eigen::VectorXd& u, int i, std::size_t node) const {
    const auto ii = static_cast<std::size_t>(map_.wrap(i));
    return map_.sign[ii] == 0.0 ? 0.0 : map_.sign[ii] * u(index(node, map_.source[ii])) + 0.0;
  }

  void set_targets(std::vector<double> m) { m_ = std::move(m); }

  // Row-weighted residual: interior rows scaled by min(1, r²).
  Eigen::VectorXd residual(const Eigen::VectorXd& u) const {
    Eigen::VectorXd f(size());
    const std::size_t last = nodes() - 1;
    for (int p = 0; p < map_.independent; ++p) {
      const double du0 = inner_[0] * u(index(0, p)) + inner_[1] * u(index(1, p)) + inner_[2] * u(index(2, p));
      f(index(0, p)) = r_[0] * du0 + m_[static_cast<std::size_t>(p)];
      const double duR =
          -(outer_[0] * u(index(last, p)) + outer_[1] * u(index(last - 1, p)) + outer_[2] * u(index(last - 2, p)));
      f(index(last, p)) = duR + kappa_ * u(index(last, p));
    }
    for (std::size_t j = 1; j < last; ++j) {
      const Stencil& s = stencils_[j];
      for (int p = 0; p < map_.independent; ++p) {
        const double lap = s.lo * u(index(j - 1, p)) + s.mid * u(index(j, p)) + s.hi * u(index(j + 1, p));
        const double wp = w(u, p, j);
        const double a = std::exp(2.0 * (w(u, p + 1, j) - wp));
        const double b = std::exp(2.0 * (wp - w(u, p - 1, j)));
        f(index(j, p)) = weights_[j] * (lap + a - b);
      }
    }
    return f;
  }

  Eigen::SparseMatrix<double> jacobian(const Eigen::VectorXd& u) const {
    std::vector<Eigen::Triplet<double>> t;
    const int P = map_.independent;
    t.reserve(static_cast<std::size_t>(size()) * static_cast<std::size_t>(3 + P));
    const std::size_t last = nodes() - 1;
    for (int p = 0; p < P; ++p) {
      for (std::size_t c = 0; c < 3; ++c) t.emplace_back(index(0, p), index(c, p), r_[0] * inner_[c]);
      for (std::size_t c = 0; c < 3; ++c) t.emplace_back(index(last, p), index(last - c, p), -outer_[c]);
      t.emplace_back(index(last, p), index(last, p), kappa_);
    }
    for (std::size_t j = 1; j < last; ++j) {
      const Stencil& s = stencils_[j];
      const double wt = weights_[j];
      for (int p = 0; p < P; ++p) {
        const Eigen::Index row = index(j, p);
        t.emplace_back(row, index(j - 1, p), wt * s.lo);
        t.emplace_back(row, index(j, p), wt * s.mid);
        t.emplace_back(row, index(j + 1, p), wt * s.hi);
        const double wp = w(u, p, j);
        const double a = std::exp(2.0 * (w(u, p + 1, j) - wp));
        const double b = std::exp(2.0 * (wp - w(u, p - 1, j)));
        for (int q = 0; q < P; ++q) {
          const double da = 2.0 * a * (map_.d(p + 1, q) - map_.d(p, q));
          const double db = 2.0 * b * (map_.d(p, q) - map_.d(p - 1, q));
          if (da - db != 0.0) t.emplace_back(row, index(j, q), wt * (da - db));
        }
      }
    }
    Eigen::SparseMatrix<double> jac(size(), size());
    jac.setFromTriplets(t.begin(), t.end());
    jac.makeCompressed();
    return jac;
  }

  Field field(const Eigen::VectorXd& u) const {
    Field out(map_.n + 1, static_cast<Eigen::Index>(nodes()));
    for (std::size_t j = 0; j < nodes(); ++j)
      for (int i = 0; i <= map_.n; ++i) out(i, static_cast<Eigen::Index>(j)) = w(u, i, j);
    return out;
  }

  // −m_p log(r) exp(−r²): singular part switched off smoothly.
  Eigen::VectorXd singular_profile(std::span<const double> m) const {
    Eigen::VectorXd u(size());
    for (std::size_t j = 0; j < nodes(); ++j)
      for (int p = 0; p < map_.independent; ++p)
        u(index(j, p)) = -m[static_cast<std::size_t>(p)] * std::log(r_[j]) * std::exp(-r_[j] * r_[j]);
    return u;
  }

 private:
  ComponentMap map_;
  std::vector<double> r_;
  std::vector<double> m_;
  double kappa_;
  std::vector<Stencil> stencils_;
  std::vector<double> weights_;
  std::array<double, 3> inner_{};
  std::array<double, 3> outer_{};
};

struct NewtonResult {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};

double max_abs(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

NewtonResult newton(const TodaSystem& sys, Eigen::VectorXd& u, double tol, int max_iterations) {
  NewtonResult result;
  Eigen::VectorXd f = sys.residual(u);
  if (!f.allFinite()) return result;
  double merit = f.squaredNorm();
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool analysed = false;
  for (int it = 0; it <= max_iterations; ++it) {
    result.iterations = it;
    result.residual = max_abs(f);
    if (result.residual < tol) {
      result.converged = true;
      return result;
    }
    if (it == max_iterations) break;
    const auto jac = sys.jacobian(u);
    if (!analysed) {
      lu.analyzePattern(jac);
      analysed = true;
    }
    lu.factorize(jac);
    if (lu.info() != Eigen::Success) return result;
    const Eigen::VectorXd step = lu.solve(-f);
    if (!step.allFinite()) return result;

    // Backtracking on ‖F‖².
    double t = 1.0;
    bool accepted = false;
    while (t >= 1.0 / 1024.0) {
      Eigen::VectorXd trial = u + t * step;
      Eigen::VectorXd ft = sys.residual(trial);
      if (ft.allFinite()) {
        const double trial_merit = ft.squaredNorm();
        if (trial_merit <= (1.0 - 1e-4 * t) * merit) {
          u = std::move(trial);
          f = std::move(ft);
          merit = trial_merit;
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) {
      // At the roundoff floor a full step may not lower ‖F‖; accept it once
      // the update itself is negligible.
      if (max_abs(step) <= 1e-12 * (1.0 + max_abs(u))) {
        result.residual = max_abs(f);
        result.converged = result.residual < tol;
      }
      return result;
    }
  }
  return result;
}

std::vector<double> independent_targets(const stokes::AsymptoticData& data) {
  const auto m = data.m();
  return std::vector<double>(m.begin(), m.begin() + (data.n + 1) / 2);
}

double outer_decay(int n, double outer) {
  const double x = 2.0 * decay_rate(n, 1) * outer;
  return 2.0 * decay_rate(n, 1) * std::cyl_bessel_k(1.0, x) / std::cyl_bessel_k(0.0, x);
}

struct GridSolve {
  Eigen::VectorXd u;
  NewtonResult newton;
  bool continuation = false;
};

GridSolve solve_on_grid(const stokes::AsymptoticData& data, const RadialGrid& grid, const SolverOptions& options,
                        bool boundary) {
  const auto m = independent_targets(data);
  TodaSystem sys(data.n, grid, m, outer_decay(data.n, grid.outer()));

  GridSolve out;
  if (!boundary) {
    out.u = sys.singular_profile(m);
    out.newton = newton(sys, out.u, options.tol, options.max_iterations);
    if (out.newton.converged) return out;
  }

  // Continuation in λ from the zero solution at λ = 0.
  out.continuation = true;
  out.u = Eigen::VectorXd::Zero(sys.size());
  double lambda = 0.0;
  double step = 1.0 / std::max(1, options.continuation_steps);
  int total_iterations = out.newton.iterations;
  auto scaled = [&](double l) {
    std::vector<double> v = m;
    for (auto& x : v) x *= l;
    return v;
  };
  while (lambda < 1.0) {
    const double next = std::min(1.0, lambda + step);
    Eigen::VectorXd trial = out.u + sys.singular_profile(scaled(next - lambda));
    sys.set_targets(scaled(next));
    const auto res = newton(sys, trial, options.tol, options.max_iterations);
    total_iterations += res.iterations;
    if (res.converged) {
      out.u = std::move(trial);
      out.newton = res;
      lambda = next;
      step = std::min(step * 1.5, 1.0 / std::max(1, options.continuation_steps));
    } else {
      step *= 0.5;
      if (step < 1e-4) throw NoConvergence(total_iterations, res.residual);
    }
  }
  out.newton.iterations = total_iterations;
  return out;
}

// Bisection for F(x) = level on x > 0 (F is decreasing).
double leading_profile_inverse(double level) {
  double lo = 1e-8;
  double hi = 1.0;
  while (tail_profile(hi, TailModel::Leading) > level) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (tail_profile(mid, TailModel::Leading) > level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

RadialGrid::RadialGrid(std::vector<double> nodes) : r_(std::move(nodes)) {
  if (r_.size() < 2) throw ConstraintViolation(r_.size(), ConstraintKind::Length, "grid needs at least 2 nodes");
  if (!(r_.front() > 0.0)) throw ConstraintViolation(0, ConstraintKind::Range, "inner radius must be positive");
  for (std::size_t i = 1; i < r_.size(); ++i)
    if (!(r_[i] > r_[i - 1])) throw ConstraintViolation(i, ConstraintKind::Range, "grid nodes must increase strictly");
}

RadialGrid RadialGrid::log_uniform(double epsilon, double outer, std::size_t nodes) {
  if (!(epsilon > 0.0) || !(outer > epsilon))
    throw ConstraintViolation(0, ConstraintKind::Range, "need 0 < epsilon < R");
  if (nodes < 4) throw ConstraintViolation(nodes, ConstraintKind::Length, "grid needs at least 4 nodes");
  const std::size_t intervals = nodes - 1;
  std::vector<double> r;
  r.reserve(nodes);
  if (outer <= 1.0) {
    const double span = std::log(outer / epsilon);
    for (std::size_t i = 0; i <= intervals; ++i)
      r.push_back(epsilon * std::exp(span * static_cast<double>(i) / static_cast<double>(intervals)));
    r.back() = outer;
    return RadialGrid(std::move(r));
  }
  if (epsilon >= 1.0) {
    for (std::size_t i = 0; i <= intervals; ++i)
      r.push_back(epsilon + (outer - epsilon) * static_cast<double>(i) / static_cast<double>(intervals));
    return RadialGrid(std::move(r));
  }
  const double log_span = std::log(1.0 / epsilon);
  const double lin_span = outer - 1.0;
  const double h = (log_span + lin_span) / static_cast<double>(intervals);
  auto n_log = static_cast<std::size_t>(std::lround(log_span / h));
  n_log = std::clamp<std::size_t>(n_log, 1, intervals - 1);
  const std::size_t n_lin = intervals - n_log;
  for (std::size_t i = 0; i < n_log; ++i)
    r.push_back(epsilon * std::exp(log_span * static_cast<double>(i) / static_cast<double>(n_log)));
  for (std::size_t i = 0; i <= n_lin; ++i)
    r.push_back(1.0 + lin_span * static_cast<double>(i) / static_cast<double>(n_lin));
  r.back() = outer;
  return RadialGrid(std::move(r));
}

RadialGrid RadialGrid::refined() const {
  std::vector<double> r;
  r.reserve(2 * r_.size() - 1);
  const std::size_t last = r_.size() - 1;
  for (std::size_t i = 0; i < last; ++i) {
    r.push_back(r_[i]);
    // cubic interpolation of r as a function of the node index, so the
    // stretching of the grid stays smooth under repeated refinement
    double mid;
    if (r_.size() < 4)
      mid = 0.5 * (r_[i] + r_[i + 1]);
    else if (i == 0)
      mid = (5 * r_[0] + 15 * r_[1] - 5 * r_[2] + r_[3]) / 16;
    else if (i + 1 == last)
      mid = (r_[i - 2] - 5 * r_[i - 1] + 15 * r_[i] + 5 * r_[i + 1]) / 16;
    else
      mid = (-r_[i - 1] + 9 * r_[i] + 9 * r_[i + 1] - r_[i + 2]) / 16;
    if (!(mid > r_[i] && mid < r_[i + 1])) mid = 0.5 * (r_[i] + r_[i + 1]);
    r.push_back(mid);
  }
  r.push_back(r_.back());
  return RadialGrid(std::move(r));
}

RadialGrid RadialGrid::coarsened() const {
  std::vector<double> r;
  for (std::size_t i = 0; i < r_.size(); i += 2) r.push_back(r_[i]);
  if (r.back() != r_.back()) r.push_back(r_.back());
  return RadialGrid(std::move(r));
}

Eigen::MatrixXd radial_residual(int n, const RadialGrid& grid, const Field& w) {
  if (n < 1) throw ConstraintViolation(0, ConstraintKind::Range, "rank n must be at least 1");
  if (w.rows() != n + 1 || w.cols() != static_cast<Eigen::Index>(grid.size()))
    throw ConstraintViolation(0, ConstraintKind::Length, "field shape does not match (n+1) x nodes");
  const auto r = grid.nodes();
  const auto interior = static_cast<Eigen::Index>(grid.size()) - 2;
  Eigen::MatrixXd res(n + 1, interior);
  for (Eigen::Index c = 0; c < interior; ++c) {
    const auto j = static_cast<std::size_t>(c + 1);
    const Stencil s = radial_stencil(r, j);
    const auto jj = static_cast<Eigen::Index>(j);
    for (int i = 0; i <= n; ++i) {
      const int up = (i + 1) % (n + 1);
      const int down = (i + n) % (n + 1);
      const double lap = s.lo * w(i, jj - 1) + s.mid * w(i, jj) + s.hi * w(i, jj + 1);
      res(i, c) = lap + std::exp(2.0 * (w(up, jj) - w(i, jj))) - std::exp(2.0 * (w(i, jj) - w(down, jj)));
    }
  }
  return res;
}

double decay_rate(int n, int k) { return 2.0 * std::sin(k * kPi / (n + 1)); }

RadialSolution solve_global(const stokes::AsymptoticData& data, const SolverOptions& options) {
  const auto valid = stokes::validate_gamma(data.n, data.gamma);
  const bool boundary = !stokes::is_strictly_admissible(valid, 1e-9);
  const double eps = boundary ? options.boundary_epsilon : options.epsilon;
  const double outer = options.outer_radius > 0.0 ? options.outer_radius : 12.0 / decay_rate(valid.n, 1);
  const auto grid = RadialGrid::log_uniform(eps, outer, options.nodes);

  const GridSolve fine = solve_on_grid(valid, grid, options, boundary);
  if (!fine.newton.converged) throw NoConvergence(fine.newton.iterations, fine.newton.residual);

  const auto m = independent_targets(valid);
  TodaSystem sys(valid.n, grid, m, outer_decay(valid.n, grid.outer()));
  RadialSolution sol;
  sol.n = valid.n;
  sol.grid = grid;
  sol.w = sys.field(fine.u);
  sol.data = valid;
  sol.iterations = fine.newton.iterations;
  sol.residual = fine.newton.residual;
  sol.boundary_case = boundary;
  sol.used_continuation = fine.continuation;

  if (options.richardson_check) {
    const auto coarse_grid = grid.coarsened();
    const GridSolve coarse = solve_on_grid(valid, coarse_grid, options, boundary);
    if (!coarse.newton.converged) throw NoConvergence(coarse.newton.iterations, coarse.newton.residual);
    TodaSystem coarse_sys(valid.n, coarse_grid, m, outer_decay(valid.n, coarse_grid.outer()));
    const Field wc = coarse_sys.field(coarse.u);
    double discrepancy = 0.0;
    for (std::size_t c = 0; c < coarse_grid.size(); ++c) {
      const std::size_t f = std::min(2 * c, grid.size() - 1);
      for (int i = 0; i <= valid.n; ++i) {
        const double wf = sol.w(i, static_cast<Eigen::Index>(f));
        discrepancy = std::max(discrepancy, std::abs(wf - wc(i, static_cast<Eigen::Index>(c))) / (1.0 + std::abs(wf)));
      }
    }
    sol.richardson_discrepancy = discrepancy;
    const double limit = options.richardson_tol > 0.0 ? options.richardson_tol : 10.0 * options.tol;
    if (discrepancy > limit) throw GridTooCoarse(discrepancy, limit);
  }
  return sol;
}

double tail_profile(double x, TailModel model) {
  if (model == TailModel::Leading) return 0.5 / std::sqrt(kPi * x) * std::exp(-2.0 * x);
  return std::cyl_bessel_k(0.0, 2.0 * x) / kPi;
}

std::vector<double> stokes_signal(const RadialSolution& sol, int k) {
  const int n = sol.n;
  if (k < 1 || k > n) throw ConstraintViolation(0, ConstraintKind::Range, "Stokes index k must lie in 1..n");
  std::vector<double> signal(sol.grid.size(), 0.0);
  for (std::size_t j = 0; j < signal.size(); ++j) {
    double acc = 0.0;
    for (int p = 0; p <= (n - 1) / 2; ++p)
      acc += sol.w(p, static_cast<Eigen::Index>(j)) * std::sin((2 * p + 1) * k * kPi / (n + 1));
    signal[j] = -4.0 / (n + 1) * acc;
  }
  return signal;
}

FitWindow default_window(const RadialSolution& sol, int k) {
  const double rate = decay_rate(sol.n, k);
  const double r_hi_signal = leading_profile_inverse(1e-10) / rate;
  const double r_lo_signal = leading_profile_inverse(1e-3) / rate;
  const double outer = sol.grid.outer();
  const FitWindow upper{std::max(0.5 * outer, r_lo_signal), std::min(outer, r_hi_signal)};
  if (upper.r_max > upper.r_min) return upper;
  // fast modes (large n, middle k) have left the band before R/2
  return {std::max(sol.grid.epsilon(), r_lo_signal), std::min(outer, r_hi_signal)};
}

StokesFit extract_stokes(const RadialSolution& sol, int k, std::optional<FitWindow> window, TailModel model) {
  const auto signal = stokes_signal(sol, k);
  const FitWindow win = window.value_or(default_window(sol, k));
  if (!(win.r_max > win.r_min)) throw SignalBelowNoise("empty fitting window");

  StokesFit fit;
  fit.window = win;
  if (sol.w.size() > 0 && sol.w.cwiseAbs().maxCoeff() == 0.0) return fit;

  const double rate = decay_rate(sol.n, k);
  std::vector<double> ratios;
  double peak = 0.0;
  for (std::size_t j = 0; j < sol.grid.size(); ++j) {
    const double r = sol.grid[j];
    if (r < win.r_min || r > win.r_max) continue;
    ratios.push_back(signal[j] / tail_profile(rate * r, model));
    peak = std::max(peak, std::abs(signal[j]));
  }
  if (ratios.size() < 3) throw SignalBelowNoise("fitting window holds fewer than 3 nodes");
  if (peak < 1e-12) throw SignalBelowNoise("tail signal below 1e-12 in the fitting window");

  double mean = 0.0;
  for (double v : ratios) mean += v;
  mean /= static_cast<double>(ratios.size());
  double var = 0.0;
  for (double v : ratios) var += (v - mean) * (v - mean);
  var /= static_cast<double>(ratios.size());
  fit.s = mean;
  fit.relative_spread = mean != 0.0 ? std::sqrt(var) / std::abs(mean) : 0.0;
  fit.samples = ratios.size();
  return fit;
}

RoundTrip painleve3_roundtrip(double gamma0, const SolverOptions& options) {
  if (!(gamma0 > -1.0 && gamma0 < 1.0))
    throw ConstraintViolation(0, ConstraintKind::Range, "gamma_0 must lie in (-1, 1)");
  const std::vector<double> gamma{gamma0, -gamma0};
  const auto sol = solve_global(stokes::validate_gamma(1, gamma), options);
  RoundTrip out;
  out.fit = extract_stokes(sol, 1);
  out.numeric = out.fit.s;
  out.exact = 2.0 * std::sin(0.5 * kPi * gamma0);
  if (out.exact != 0.0) out.relative_error = std::abs(out.numeric - out.exact) / std::abs(out.exact);
  return out;
}

}  // namespace ttt::toda
