#include "ttt/minimal.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "ttt/errors.hpp"
#include "ttt/stokesdata.hpp"

namespace ttt::minimal {

namespace {

void require_rank(int n) {
  if (n < 1) throw ConstraintViolation(0, ConstraintKind::Range, "rank n must be at least 1");
}

WeightVector zero(int n) { return WeightVector(static_cast<std::size_t>(n) + 1, Rational(0)); }

WeightVector axpy(const Rational& a, const WeightVector& x, WeightVector y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
  return y;
}

// Compositions of `total` into `parts` nonnegative integers, k_0 largest first.
void compositions(int parts, int total, std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& emit) {
  if (static_cast<int>(cur.size()) == parts - 1) {
    cur.push_back(total);
    emit(cur);
    cur.pop_back();
    return;
  }
  for (int v = total; v >= 0; --v) {
    cur.push_back(v);
    compositions(parts, total - v, cur, emit);
    cur.pop_back();
  }
}

}  // namespace

FixedPointData validate_fixed_point(int n, int N, const std::vector<int>& k) {
  require_rank(n);
  if (k.size() != static_cast<std::size_t>(n) + 1)
    throw ConstraintViolation(k.size(), ConstraintKind::Length, "expected n+1 exponents");
  for (std::size_t i = 0; i < k.size(); ++i)
    if (k[i] < 0) throw ConstraintViolation(i, ConstraintKind::Range, "k_i must be nonnegative");
  const int sum = std::accumulate(k.begin(), k.end(), 0);
  if (n + 1 + sum != N)
    throw ConstraintViolation(0, ConstraintKind::Normalization, "n + 1 + sum k_i must equal N");
  if (std::gcd(sum, N) != 1) throw ConstraintViolation(0, ConstraintKind::Coprime, "sum k_i must be coprime to N");
  return FixedPointData{n, N, k, sum};
}

std::vector<FixedPointData> enumerate_fixed_points(int n, int N) {
  require_rank(n);
  if (N <= n + 1) throw ConstraintViolation(0, ConstraintKind::Range, "N must exceed n + 1");
  std::vector<FixedPointData> out;
  const int total = N - n - 1;
  std::vector<int> cur;
  compositions(n + 1, total, cur, [&](const std::vector<int>& k) {
    if (std::gcd(total, N) == 1) out.push_back(FixedPointData{n, N, k, total});
  });
  return out;
}

WeightVector basic_weight(int n, int j) {
  require_rank(n);
  if (j < 1 || j > n) throw ConstraintViolation(0, ConstraintKind::Range, "basic weight index out of range");
  // ε_j = x_0 + ⋯ + x_{j−1} − (j/(n+1)) Σ x_i
  WeightVector e = zero(n);
  const Rational shift(j, n + 1);
  for (int i = 0; i <= n; ++i) e[static_cast<std::size_t>(i)] = (i < j ? Rational(1) : Rational(0)) - shift;
  return e;
}

WeightVector weyl_vector(int n) {
  require_rank(n);
  WeightVector rho;
  for (int i = 0; i <= n; ++i) rho.push_back(Rational(n - 2 * i, 2));
  return rho;
}

Rational inner(const WeightVector& a, const WeightVector& b) {
  Rational s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

int DominantWeight::level() const { return std::accumulate(coefficients.begin(), coefficients.end(), 0); }

WeightVector DominantWeight::coordinates() const {
  WeightVector w = zero(n);
  for (int i = 1; i <= n; ++i)
    w = axpy(Rational(coefficients[static_cast<std::size_t>(i - 1)]), basic_weight(n, i), std::move(w));
  return w;
}

DominantWeight dominant_weight(const FixedPointData& f) {
  const auto valid = validate_fixed_point(f.n, f.N, f.k);
  DominantWeight w{valid.n, std::vector<int>(valid.k.begin() + 1, valid.k.end()), valid.k_sum};
  return w;
}

bool weight_identity_holds(const FixedPointData& f) {
  const auto m = stokes::solve_mandk(f.n, f.N, f.k);
  const auto rho = weyl_vector(f.n);
  const auto lambda = dominant_weight(f).coordinates();
  const Rational scale(f.N, f.n + 1);
  for (std::size_t i = 0; i < rho.size(); ++i)
    if (scale * (m[i] + rho[i]) != rho[i] + lambda[i]) return false;
  return true;
}

CentralCharge ceff(const FixedPointData& f) {
  const auto valid = validate_fixed_point(f.n, f.N, f.k);
  const int n = valid.n;
  const auto lambda = dominant_weight(valid).coordinates();
  const auto shifted = axpy(-Rational(valid.k_sum, n + 1), weyl_vector(n), lambda);
  const Rational via_weight = Rational(n) - 12 * Rational(n + 1, valid.N) * inner(shifted, shifted);

  const auto m = stokes::solve_mandk(n, valid.N, valid.k);
  const Rational via_m = Rational(n) - 12 * Rational(valid.N, n + 1) * inner(m, m);

  if (via_weight != via_m)
    throw IdentityViolation("c_eff formulas disagree: " + to_string(via_weight) + " vs " + to_string(via_m));
  return CentralCharge{via_weight, via_m};
}

AlcoveReport alcove_identity_check(int n, int l) {
  require_rank(n);
  if (l < 0) throw ConstraintViolation(0, ConstraintKind::Range, "level must be nonnegative");
  AlcoveReport report{n, l, {}, {}, {}, {}};

  // Left side: coefficients k_i ≥ 0 with Σ k_i ≤ l, shifted by ρ = Σ ε_i.
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> level_walk = [&](int pos, int remaining) {
    if (pos == n) {
      std::vector<int> shifted = cur;
      for (auto& c : shifted) c += 1;
      report.shifted_level_weights.push_back(std::move(shifted));
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      cur[static_cast<std::size_t>(pos)] = v;
      level_walk(pos + 1, remaining - v);
    }
  };
  level_walk(0, l);

  // Right side: every dominant weight in a bounding box, tested against the
  // open alcove directly in x-coordinates: x_0 > x_1 > ⋯ > x_n and
  // x_0 − x_n < l + n + 1.
  const int box = l + n + 1;
  const Rational dilation(box);
  std::fill(cur.begin(), cur.end(), 0);
  std::function<void(int)> box_walk = [&](int pos) {
    if (pos == n) {
      DominantWeight w{n, cur, 0};
      const auto x = w.coordinates();
      bool inside = x.front() - x.back() < dilation;
      for (std::size_t i = 1; i < x.size() && inside; ++i) inside = x[i - 1] > x[i];
      if (inside) report.interior_points.push_back(cur);
      return;
    }
    for (int v = 0; v <= box; ++v) {
      cur[static_cast<std::size_t>(pos)] = v;
      box_walk(pos + 1);
    }
  };
  box_walk(0);

  auto sorted = [](std::vector<std::vector<int>> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto left = sorted(report.shifted_level_weights);
  const auto right = sorted(report.interior_points);
  std::set_difference(left.begin(), left.end(), right.begin(), right.end(), std::back_inserter(report.only_shifted));
  std::set_difference(right.begin(), right.end(), left.begin(), left.end(), std::back_inserter(report.only_interior));
  return report;
}

}  // namespace ttt::minimal
