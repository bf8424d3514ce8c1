#include "ttt/coxeter.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "ttt/errors.hpp"

namespace ttt::coxeter {

namespace {

void require_rank(int n) {
  if (n < 1) throw ConstraintViolation(0, ConstraintKind::Range, "rank n must be at least 1");
}

LatticeVector unit(int n, int i) {
  LatticeVector e(static_cast<std::size_t>(n) + 1, 0);
  e[static_cast<std::size_t>(i)] = 1;
  return e;
}

// Orbit index of every root under the Coxeter element, numbered in order of
// first appearance in the lexicographic root list.
std::map<std::pair<int, int>, int> coxeter_orbits(int n, const CoxeterElement& c) {
  std::map<std::pair<int, int>, int> orbit;
  int next = 0;
  const RootSystemA system(n);
  for (const auto& r : system.roots()) {
    if (orbit.contains({r.i, r.j})) continue;
    Root cur = r;
    do {
      orbit[{cur.i, cur.j}] = next;
      cur = c.apply(cur);
    } while (!(cur == r));
    ++next;
  }
  return orbit;
}

}  // namespace

RootSystemA::RootSystemA(int n) : n_(n) {
  require_rank(n);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (i != j) roots_.push_back({i, j});
}

LatticeVector RootSystemA::vector(const Root& r) const {
  LatticeVector v(static_cast<std::size_t>(n_) + 1, 0);
  v[static_cast<std::size_t>(r.i)] += 1;
  v[static_cast<std::size_t>(r.j)] -= 1;
  return v;
}

Root RootSystemA::simple_root(int i) const {
  if (i < 1 || i > n_) throw std::out_of_range("simple_root: index out of range");
  return {i - 1, i};
}

int dot(const LatticeVector& a, const LatticeVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

LatticeVector reflect(const LatticeVector& v, const LatticeVector& root) {
  // r_α(v) = v − 2⟨v,α⟩/⟨α,α⟩ α, with ⟨α,α⟩ = 2 for every root of A_n.
  const int norm = dot(root, root);
  if (norm != 2) throw std::invalid_argument("reflect: not a root of A_n");
  const int c = dot(v, root);
  LatticeVector out = v;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= c * root[i];
  return out;
}

LatticeVector CoxeterElement::apply(const LatticeVector& v) const {
  LatticeVector out(v.size(), 0);
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(perm[i])] = v[i];
  return out;
}

Root CoxeterElement::apply(const Root& r) const {
  return {perm[static_cast<std::size_t>(r.i)], perm[static_cast<std::size_t>(r.j)]};
}

Eigen::MatrixXd CoxeterElement::matrix() const {
  const Eigen::Index size = n + 1;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(size, size);
  for (Eigen::Index j = 0; j < size; ++j) p(perm[static_cast<std::size_t>(j)], j) = 1.0;
  return p;
}

int CoxeterElement::order() const {
  std::vector<int> cur = perm;
  for (int p = 1; p <= 1000; ++p) {
    bool identity = true;
    for (std::size_t i = 0; i < cur.size(); ++i) identity = identity && cur[i] == static_cast<int>(i);
    if (identity) return p;
    std::vector<int> next(cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i) next[i] = perm[static_cast<std::size_t>(cur[i])];
    cur = std::move(next);
  }
  throw std::logic_error("CoxeterElement::order: not a finite-order permutation");
}

CoxeterElement coxeter_element(int n) {
  require_rank(n);
  const RootSystemA system(n);
  CoxeterElement c{n, std::vector<int>(static_cast<std::size_t>(n) + 1)};
  for (int j = 0; j <= n; ++j) {
    LatticeVector v = unit(n, j);
    // rightmost factor acts first
    for (int i = n; i >= 1; --i) v = reflect(v, system.vector(system.simple_root(i)));
    const auto it = std::find(v.begin(), v.end(), 1);
    c.perm[static_cast<std::size_t>(j)] = static_cast<int>(it - v.begin());
  }
  return c;
}

std::array<double, 2> CoxeterProjection::project(const Eigen::VectorXd& x) const {
  return {x.dot(u), x.dot(v)};
}

CoxeterProjection coxeter_plane(int n) {
  require_rank(n);
  if (n == 1) throw DegeneratePlane("the Coxeter plane of A_1 is degenerate (Coxeter number 2)");
  const CoxeterElement c = coxeter_element(n);
  const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / (n + 1));

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(c.matrix().cast<Complex>());
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < solver.eigenvalues().size(); ++i)
    if (std::abs(solver.eigenvalues()(i) - omega) < std::abs(solver.eigenvalues()(best) - omega)) best = i;
  Eigen::VectorXcd zeta = solver.eigenvectors().col(best);
  zeta /= zeta(0);

  CoxeterProjection proj;
  proj.n = n;
  proj.u = zeta.real().normalized();
  // With (u, −Im ζ) the bilinear pairing with ζ turns into conjugation, so c acts by +2π/(n+1).
  proj.v = (-zeta.imag()).normalized();

  const auto orbits = coxeter_orbits(n, c);
  const RootSystemA system(n);
  for (const auto& r : system.roots()) {
    const auto lv = system.vector(r);
    Eigen::VectorXd x(n + 1);
    for (int i = 0; i <= n; ++i) x(i) = lv[static_cast<std::size_t>(i)];
    ProjectedRoot pr;
    pr.label = r;
    pr.point = proj.project(x);
    pr.orbit = orbits.at({r.i, r.j});
    pr.angle = std::atan2(pr.point[1], pr.point[0]);
    proj.roots.push_back(pr);
    proj.orbit_count = std::max(proj.orbit_count, pr.orbit + 1);
  }
  return proj;
}

double soliton_mass(int n, int d) { return 2.0 * std::sin(std::abs(d) * std::numbers::pi / (n + 1)); }

int SolitonSpectrum::count(int particle) const {
  return static_cast<int>(std::count_if(pairs.begin(), pairs.end(), [&](const SolitonPair& p) { return p.particle == particle; }));
}

std::vector<std::vector<int>> k_subsets(int size, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > size) return out;
  std::vector<int> cur(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == size - k + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

SolitonSpectrum soliton_spectrum(int n, int k) {
  require_rank(n);
  if (k < 1 || k > n) throw ConstraintViolation(0, ConstraintKind::Range, "representation index k must lie in 1..n");
  SolitonSpectrum spec{n, k, {}, {}};
  for (const auto& subset : k_subsets(n + 1, k)) {
    LatticeVector w(static_cast<std::size_t>(n) + 1, 0);
    for (int i : subset) w[static_cast<std::size_t>(i)] = 1;
    spec.weights.push_back(std::move(w));
  }

  const auto c = coxeter_element(n);
  const auto orbits = coxeter_orbits(n, c);
  for (std::size_t a = 0; a < spec.weights.size(); ++a)
    for (std::size_t b = a + 1; b < spec.weights.size(); ++b) {
      int plus = -1;
      int minus = -1;
      bool is_root = true;
      for (std::size_t i = 0; i < spec.weights[a].size() && is_root; ++i) {
        const int d = spec.weights[a][i] - spec.weights[b][i];
        if (d == 0) continue;
        if (d == 1 && plus < 0)
          plus = static_cast<int>(i);
        else if (d == -1 && minus < 0)
          minus = static_cast<int>(i);
        else
          is_root = false;
      }
      if (!is_root || plus < 0 || minus < 0) continue;
      SolitonPair p;
      p.from = static_cast<int>(a);
      p.to = static_cast<int>(b);
      p.root = {plus, minus};
      p.mass = soliton_mass(n, plus - minus);
      p.orbit = orbits.at({plus, minus});
      const int d = ((minus - plus) % (n + 1) + (n + 1)) % (n + 1);
      p.particle = std::min(d, n + 1 - d);
      spec.pairs.push_back(p);
    }
  return spec;
}

Eigen::MatrixXcd wedge_matrix(const Eigen::MatrixXcd& m, int k) {
  if (m.rows() != m.cols()) throw std::invalid_argument("wedge_matrix: matrix must be square");
  const int size = static_cast<int>(m.rows());
  if (k < 1 || k > size) throw ConstraintViolation(0, ConstraintKind::Range, "wedge_matrix: k must lie in 1..size");
  const auto subsets = k_subsets(size, k);
  const auto count = static_cast<Eigen::Index>(subsets.size());
  Eigen::MatrixXcd out(count, count);
  Eigen::MatrixXcd minor(k, k);
  for (Eigen::Index r = 0; r < count; ++r)
    for (Eigen::Index s = 0; s < count; ++s) {
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          minor(a, b) = m(subsets[static_cast<std::size_t>(r)][static_cast<std::size_t>(a)],
                          subsets[static_cast<std::size_t>(s)][static_cast<std::size_t>(b)]);
      out(r, s) = minor.determinant();
    }
  return out;
}

}  // namespace ttt::coxeter
