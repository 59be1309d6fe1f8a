#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lmwishart/affine.hpp"
#include "lmwishart/error.hpp"

namespace lmw {

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

inline std::vector<double> to_doubles(const RationalVector& x) {
  std::vector<double> out;
  for (const auto& q : x) out.push_back(q.get_d());
  return out;
}

/// Reduced row echelon form over the rationals, in place. Returns pivot columns.
inline std::vector<int> rref(RationalMatrix& m, int cols) {
  std::vector<int> pivots;
  int row = 0;
  const int rows = static_cast<int>(m.size());
  for (int c = 0; c < cols && row < rows; ++c) {
    int sel = -1;
    for (int i = row; i < rows; ++i)
      if (m[i][c] != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(m[row], m[sel]);
    Rational inv = 1 / m[row][c];
    for (auto& x : m[row]) x *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == row || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t k = 0; k < m[i].size(); ++k) m[i][k] -= f * m[row][k];
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

inline int rank(RationalMatrix m, int cols) { return static_cast<int>(rref(m, cols).size()); }

/// Affine solution set {x0 + N z} of A x + c = 0 (rows are [a | c]).
struct AffineSubspace {
  RationalVector x0;
  RationalMatrix basis;  // columns of N stored as vectors
};

/// Solves the equality rows; empty optional when inconsistent.
inline std::optional<AffineSubspace> solve_equalities(RationalMatrix rows, int n) {
  std::vector<int> piv = rref(rows, n);
  for (std::size_t i = piv.size(); i < rows.size(); ++i)
    if (rows[i][n] != 0) return std::nullopt;
  AffineSubspace out;
  out.x0.assign(static_cast<std::size_t>(n), Rational(0));
  for (std::size_t i = 0; i < piv.size(); ++i) out.x0[piv[i]] = -rows[i][n];
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (int c : piv) is_pivot[c] = true;
  for (int f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    RationalVector v(static_cast<std::size_t>(n), Rational(0));
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -rows[i][f];
    out.basis.push_back(v);
  }
  return out;
}

enum class LpStatus { Optimal, Unbounded, Infeasible };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  RationalVector x;
};

namespace detail {

/// max c.x subject to A x <= b, x >= 0. Dense two-phase tableau simplex with
/// Bland's rule; exact over the rationals.
inline LpResult simplex_standard(const RationalMatrix& a, const RationalVector& b, const RationalVector& c) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(c.size());
  // Columns: x (n), slack (m), artificial (one per negative-rhs row), rhs.
  std::vector<int> art_row;
  for (int i = 0; i < m; ++i)
    if (b[i] < 0) art_row.push_back(i);
  const int k = static_cast<int>(art_row.size());
  const int cols = n + m + k;
  RationalMatrix t(static_cast<std::size_t>(m), RationalVector(static_cast<std::size_t>(cols + 1), Rational(0)));
  std::vector<int> basis(static_cast<std::size_t>(m));
  int next_art = 0;
  for (int i = 0; i < m; ++i) {
    Rational sign = b[i] < 0 ? -1 : 1;
    for (int j = 0; j < n; ++j) t[i][j] = sign * a[i][j];
    t[i][n + i] = sign;
    t[i][cols] = sign * b[i];
    if (b[i] < 0) {
      t[i][n + m + next_art] = 1;
      basis[i] = n + m + next_art;
      ++next_art;
    } else {
      basis[i] = n + i;
    }
  }

  auto pivot = [&](int r, int col) {
    Rational inv = 1 / t[r][col];
    for (auto& x : t[r]) x *= inv;
    for (int i = 0; i < m; ++i) {
      if (i == r || t[i][col] == 0) continue;
      Rational f = t[i][col];
      for (int j = 0; j <= cols; ++j) t[i][j] -= f * t[r][j];
    }
    basis[r] = col;
  };

  // Returns false when unbounded.
  auto run = [&](const RationalVector& obj, int allowed_cols) -> bool {
    while (true) {
      int enter = -1;
      for (int j = 0; j < allowed_cols && enter < 0; ++j) {
        if (std::find(basis.begin(), basis.end(), j) != basis.end()) continue;
        Rational rc = obj[j];
        for (int i = 0; i < m; ++i) rc -= obj[basis[i]] * t[i][j];
        if (rc > 0) enter = j;
      }
      if (enter < 0) return true;
      int leave = -1;
      Rational best;
      for (int i = 0; i < m; ++i) {
        if (t[i][enter] <= 0) continue;
        Rational ratio = t[i][cols] / t[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  };

  if (k > 0) {
    RationalVector phase1(static_cast<std::size_t>(cols), Rational(0));
    for (int j = n + m; j < cols; ++j) phase1[j] = -1;
    run(phase1, cols);
    Rational sum = 0;
    for (int i = 0; i < m; ++i)
      if (basis[i] >= n + m) sum += t[i][cols];
    if (sum != 0) return {LpStatus::Infeasible, 0, {}};
    for (int i = 0; i < m; ++i) {
      if (basis[i] < n + m) continue;
      for (int j = 0; j < n + m; ++j)
        if (t[i][j] != 0) {
          pivot(i, j);
          break;
        }
    }
  }
  RationalVector obj(static_cast<std::size_t>(cols), Rational(0));
  for (int j = 0; j < n; ++j) obj[j] = c[j];
  // Rows whose artificial could not be driven out are redundant; their
  // artificial stays at zero and is excluded from entering.
  if (!run(obj, n + m)) return {LpStatus::Unbounded, 0, {}};
  LpResult res{LpStatus::Optimal, 0, RationalVector(static_cast<std::size_t>(n), Rational(0))};
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = t[i][cols];
  for (int j = 0; j < n; ++j) res.value += c[j] * res.x[j];
  return res;
}

}  // namespace detail

/// An affine row a.x + c over n variables.
struct AffineRow {
  RationalVector a;
  Rational c;
  Rational at(const RationalVector& x) const {
    Rational v = c;
    for (std::size_t i = 0; i < a.size(); ++i) v += a[i] * x[i];
    return v;
  }
};

/// max objective(x) subject to eq_i(x) = 0 and ge_i(x) >= 0, x free in R^n.
inline LpResult maximize(const AffineRow& objective, const std::vector<AffineRow>& eq, const std::vector<AffineRow>& ge, int n) {
  RationalMatrix rows;
  for (const auto& e : eq) {
    RationalVector r = e.a;
    r.push_back(e.c);
    rows.push_back(r);
  }
  auto sub = solve_equalities(rows, n);
  if (!sub) return {LpStatus::Infeasible, 0, {}};
  const int d = static_cast<int>(sub->basis.size());
  // Substitute x = x0 + N z, then z = zp - zm.
  auto reduce = [&](const AffineRow& g, RationalVector& coef) {
    Rational c0 = g.at(sub->x0);
    coef.assign(static_cast<std::size_t>(2 * d), Rational(0));
    for (int k = 0; k < d; ++k) {
      Rational s = 0;
      for (int i = 0; i < n; ++i) s += g.a[i] * sub->basis[k][i];
      coef[k] = s;
      coef[d + k] = -s;
    }
    return c0;
  };
  RationalMatrix a;
  RationalVector b;
  for (const auto& g : ge) {
    RationalVector coef;
    Rational c0 = reduce(g, coef);
    // coef.w + c0 >= 0  <=>  -coef.w <= c0
    for (auto& x : coef) x = -x;
    a.push_back(coef);
    b.push_back(c0);
  }
  RationalVector cobj;
  Rational c0 = reduce(objective, cobj);
  LpResult res = detail::simplex_standard(a, b, cobj);
  if (res.status != LpStatus::Optimal) return res;
  RationalVector x = sub->x0;
  for (int k = 0; k < d; ++k) {
    Rational z = res.x[k] - res.x[d + k];
    for (int i = 0; i < n; ++i) x[i] += z * sub->basis[k][i];
  }
  return {LpStatus::Optimal, res.value + c0, x};
}

/// Equalities (form = 0) and strict inequalities (form > 0) over
/// alpha_1..alpha_r, beta_2..beta_r.
struct LinearConstraintSet {
  int r = 1;
  std::vector<AffineForm> equalities;
  std::vector<AffineForm> strict;

  int num_variables() const { return 2 * r - 1; }

  void add_equality(const AffineForm& f) {
    if (std::find(equalities.begin(), equalities.end(), f) == equalities.end()) equalities.push_back(f);
  }
  /// Records f > 0.
  void add_positive(const AffineForm& f) {
    if (std::find(strict.begin(), strict.end(), f) == strict.end()) strict.push_back(f);
  }
  /// Records f < 0.
  void add_negative(const AffineForm& f) { add_positive(-f); }

  bool contains(const RationalVector& x) const {
    for (const auto& e : equalities)
      if (e.evaluate(x, r) != 0) return false;
    for (const auto& g : strict)
      if (!(g.evaluate(x, r) > 0)) return false;
    return true;
  }

  AffineRow row_of(const AffineForm& f) const { return {f.row(r), f.constant()}; }
  std::vector<AffineRow> equality_rows() const {
    std::vector<AffineRow> out;
    for (const auto& e : equalities) out.push_back(row_of(e));
    return out;
  }
};

struct StrictPoint {
  RationalVector x;
  /// min_i g_i(x), capped at 1.
  Rational slack;
};

/// A point maximizing the smallest strict slack (capped at 1); empty when the
/// set has no strictly feasible point.
inline std::optional<StrictPoint> strict_center(const LinearConstraintSet& cs) {
  const int n = cs.num_variables();
  // Variables: x (n), t.
  auto extend = [&](const AffineForm& f, const Rational& tcoef) {
    AffineRow row = cs.row_of(f);
    row.a.push_back(tcoef);
    return row;
  };
  std::vector<AffineRow> eq, ge;
  for (const auto& e : cs.equalities) eq.push_back(extend(e, 0));
  for (const auto& g : cs.strict) ge.push_back(extend(g, -1));
  AffineRow cap{RationalVector(static_cast<std::size_t>(n), Rational(0)), 1};
  cap.a.push_back(-1);
  ge.push_back(cap);
  AffineRow obj{RationalVector(static_cast<std::size_t>(n + 1), Rational(0)), 0};
  obj.a[n] = 1;
  LpResult res = maximize(obj, eq, ge, n + 1);
  if (res.status != LpStatus::Optimal || !(res.value > 0)) return std::nullopt;
  res.x.pop_back();
  return StrictPoint{res.x, res.value};
}

inline bool strictly_feasible(const LinearConstraintSet& cs) { return strict_center(cs).has_value(); }

/// (2r - 1) - rank(equalities) when strictly feasible.
inline std::optional<int> feasible_dimension(const LinearConstraintSet& cs) {
  if (!strictly_feasible(cs)) return std::nullopt;
  RationalMatrix rows;
  for (const auto& e : cs.equalities) rows.push_back(e.row(cs.r));
  return cs.num_variables() - rank(rows, cs.num_variables());
}

/// Exact test of a ⊆ b for relatively open polyhedra on the same variables.
inline bool is_subset(const LinearConstraintSet& a, const LinearConstraintSet& b) {
  if (a.r != b.r) throw Error("constraint sets have different clique counts");
  auto center = strict_center(a);
  if (!center) return true;
  const int n = a.num_variables();
  RationalMatrix rows;
  for (const auto& e : a.equalities) {
    RationalVector r = e.row(a.r);
    r.push_back(e.constant());
    rows.push_back(r);
  }
  AffineSubspace aff = *solve_equalities(rows, n);
  auto constant_on_aff = [&](const AffineRow& g) {
    for (const auto& v : aff.basis) {
      Rational s = 0;
      for (int i = 0; i < n; ++i) s += g.a[i] * v[i];
      if (s != 0) return false;
    }
    return true;
  };
  for (const auto& e : b.equalities) {
    AffineRow g = b.row_of(e);
    if (!constant_on_aff(g) || g.at(aff.x0) != 0) return false;
  }
  std::vector<AffineRow> ge;
  for (const auto& g : a.strict) ge.push_back(a.row_of(g));
  std::vector<AffineRow> eq = a.equality_rows();
  for (const auto& f : b.strict) {
    AffineRow g = b.row_of(f);
    if (constant_on_aff(g)) {
      if (!(g.at(aff.x0) > 0)) return false;
      continue;
    }
    AffineRow neg{g.a, -g.c};
    for (auto& x : neg.a) x = -x;
    LpResult res = maximize(neg, eq, ge, n);
    if (res.status == LpStatus::Unbounded) return false;
    if (res.status == LpStatus::Optimal && res.value > 0) return false;
  }
  return true;
}

inline bool same_set(const LinearConstraintSet& a, const LinearConstraintSet& b) { return is_subset(a, b) && is_subset(b, a); }

/// Random exact points strictly inside the set: the strict center moved along
/// random rational directions of the equality nullspace.
template <class Rng>
std::vector<RationalVector> sample_strict_points(const LinearConstraintSet& cs, int count, Rng& rng) {
  auto center = strict_center(cs);
  if (!center) return {};
  const int n = cs.num_variables();
  RationalMatrix rows;
  for (const auto& e : cs.equalities) {
    RationalVector r = e.row(cs.r);
    r.push_back(e.constant());
    rows.push_back(r);
  }
  AffineSubspace aff = *solve_equalities(rows, n);
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<int> frac_num(1, 99);
  std::vector<RationalVector> out;
  for (int s = 0; s < count; ++s) {
    RationalVector dir(static_cast<std::size_t>(n), Rational(0));
    for (const auto& v : aff.basis) {
      int k = coef(rng);
      for (int i = 0; i < n; ++i) dir[i] += k * v[i];
    }
    Rational step = 1;
    for (const auto& f : cs.strict) {
      AffineRow g = cs.row_of(f);
      Rational slope = 0;
      for (int i = 0; i < n; ++i) slope += g.a[i] * dir[i];
      if (slope < 0) step = std::min(step, Rational(g.at(center->x) / -slope));
    }
    Rational t = step * Rational(frac_num(rng), 100);
    RationalVector x = center->x;
    for (int i = 0; i < n; ++i) x[i] += t * dir[i];
    out.push_back(x);
  }
  return out;
}

}  // namespace lmw
