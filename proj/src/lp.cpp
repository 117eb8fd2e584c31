#include "gtensor/lp.hpp"

#include <stdexcept>

namespace gtensor {

namespace {

struct Tableau {
  Matrix rows;               // m rows of width cols + 1 (last entry is the rhs)
  std::vector<std::size_t> basis;
  std::size_t cols = 0;
  std::size_t pivots = 0;

  void pivot(std::size_t r, std::size_t col) {
    auto& pr = rows[r];
    Rational inv = 1 / pr[col];
    for (auto& x : pr) x *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][col] == 0) continue;
      Rational f = rows[i][col];
      for (std::size_t j = 0; j <= cols; ++j)
        if (pr[j] != 0) rows[i][j] -= f * pr[j];
    }
    basis[r] = col;
    ++pivots;
  }

  // Minimises cost over columns allowed[j]; returns false if unbounded.
  bool optimise(const std::vector<Rational>& cost, const std::vector<bool>& allowed) {
    while (true) {
      // reduced cost d_j = c_j - sum_i c_{B_i} a_ij
      std::size_t enter = cols;
      for (std::size_t j = 0; j < cols && enter == cols; ++j) {
        if (!allowed[j]) continue;
        Rational d = cost[j];
        for (std::size_t i = 0; i < rows.size(); ++i)
          if (rows[i][j] != 0) d -= cost[basis[i]] * rows[i][j];
        if (d < 0) enter = j;
      }
      if (enter == cols) return true;
      std::size_t leave = rows.size();
      Rational best;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][enter] <= 0) continue;
        Rational ratio = rows[i][cols] / rows[i][enter];
        if (leave == rows.size() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows.size()) return false;
      pivot(leave, enter);
    }
  }
};

// Solves M^T y = v for square M by Gaussian elimination.
std::vector<Rational> solve_transposed(const Matrix& m, const std::vector<Rational>& v) {
  const std::size_t n = m.size();
  Matrix a(n, std::vector<Rational>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[j][i];
    a[i][n] = v[i];
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && a[p][col] == 0) ++p;
    if (p == n) throw std::logic_error("singular basis");
    std::swap(a[p], a[col]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      Rational f = a[i][col] / a[col][col];
      for (std::size_t j = col; j <= n; ++j) a[i][j] -= f * a[col][j];
    }
  }
  std::vector<Rational> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = a[i][n] / a[i][i];
  return y;
}

}  // namespace

LpResult solve_lp(const Matrix& a, const std::vector<Rational>& b, const std::vector<Rational>& c) {
  const std::size_t m = a.size(), n = c.size();
  if (b.size() != m) throw std::invalid_argument("solve_lp: rhs length mismatch");
  for (const auto& row : a)
    if (row.size() != n) throw std::invalid_argument("solve_lp: row length mismatch");
  Tableau t;
  t.cols = n + m;
  t.rows.assign(m, std::vector<Rational>(t.cols + 1));
  t.basis.resize(m);
  std::vector<bool> flipped(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    flipped[i] = b[i] < 0;
    Rational s = flipped[i] ? Rational(-1) : Rational(1);
    for (std::size_t j = 0; j < n; ++j) t.rows[i][j] = s * a[i][j];
    t.rows[i][n + i] = 1;
    t.rows[i][t.cols] = s * b[i];
    t.basis[i] = n + i;
  }
  std::vector<Rational> phase1(t.cols, Rational(0));
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = 1;
  std::vector<bool> all(t.cols, true);
  t.optimise(phase1, all);
  LpResult res;
  for (std::size_t i = 0; i < m; ++i)
    if (t.basis[i] >= n && t.rows[i][t.cols] != 0) {
      res.status = LpStatus::Infeasible;
      res.pivots = t.pivots;
      return res;
    }
  // Drive artificials out of the basis; rows where that is impossible are redundant.
  std::vector<bool> redundant(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis[i] < n) continue;
    std::size_t j = 0;
    while (j < n && t.rows[i][j] == 0) ++j;
    if (j < n)
      t.pivot(i, j);
    else
      redundant[i] = true;
  }
  std::vector<bool> structural(t.cols, false);
  for (std::size_t j = 0; j < n; ++j) structural[j] = true;
  std::vector<Rational> cost(t.cols, Rational(0));
  for (std::size_t j = 0; j < n; ++j) cost[j] = c[j];
  // Redundant rows keep an artificial at zero; it never re-enters.
  if (!t.optimise(cost, structural)) {
    res.status = LpStatus::Unbounded;
    res.pivots = t.pivots;
    return res;
  }
  res.status = LpStatus::Optimal;
  res.pivots = t.pivots;
  res.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i)
    if (t.basis[i] < n) res.x[t.basis[i]] = t.rows[i][t.cols];
  res.objective = 0;
  for (std::size_t j = 0; j < n; ++j) res.objective += c[j] * res.x[j];
  // Duals from the non-redundant rows: B^T y = c_B on the original (unflipped) system.
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < m; ++i)
    if (!redundant[i]) keep.push_back(i);
  Matrix bm(keep.size(), std::vector<Rational>(keep.size()));
  std::vector<Rational> cb(keep.size());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    std::size_t col = t.basis[keep[r]];
    cb[r] = c[col];
    for (std::size_t s = 0; s < keep.size(); ++s) bm[s][r] = a[keep[s]][col];
  }
  res.dual.assign(m, Rational(0));
  if (!keep.empty()) {
    auto y = solve_transposed(bm, cb);
    for (std::size_t r = 0; r < keep.size(); ++r) res.dual[keep[r]] = y[r];
  }
  return res;
}

bool certify_lp(const Matrix& a, const std::vector<Rational>& b, const std::vector<Rational>& c,
                const LpResult& r, std::string* why) {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (r.status != LpStatus::Optimal) return fail("not optimal");
  const std::size_t m = a.size(), n = c.size();
  if (r.x.size() != n || r.dual.size() != m) return fail("certificate has wrong dimensions");
  for (const auto& x : r.x)
    if (x < 0) return fail("negative primal entry");
  for (std::size_t i = 0; i < m; ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < n; ++j) s += a[i][j] * r.x[j];
    if (s != b[i]) return fail("primal constraint violated");
  }
  for (std::size_t j = 0; j < n; ++j) {
    Rational red = c[j];
    for (std::size_t i = 0; i < m; ++i) red -= a[i][j] * r.dual[i];
    if (red < 0) return fail("dual infeasible");
  }
  Rational px = 0, dy = 0;
  for (std::size_t j = 0; j < n; ++j) px += c[j] * r.x[j];
  for (std::size_t i = 0; i < m; ++i) dy += b[i] * r.dual[i];
  if (px != dy || px != r.objective) return fail("duality gap");
  return true;
}

}  // namespace gtensor
