#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "sagin/lp.hpp"

namespace sagin::testing {

// Solves a square system in place by Gaussian elimination with partial
// pivoting. Returns false when the matrix is singular.
inline bool solve_square(std::vector<std::vector<double>> a,
                         std::vector<double> b, std::vector<double>* x) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int best = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[best][c])) best = r;
    }
    if (std::abs(a[best][c]) < 1e-10) return false;
    std::swap(a[best], a[c]);
    std::swap(b[best], b[c]);
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      if (f == 0.0) continue;
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x->assign(n, 0.0);
  for (int i = 0; i < n; ++i) (*x)[i] = b[i] / a[i][i];
  return true;
}

// Brute-force optimum of an LP whose variables all have bounds [0, inf):
// every choice of m basic columns (structural + slack) is solved directly and
// the best nonnegative basic solution is kept. Only meaningful for bounded
// problems. Returns nullopt when no vertex is feasible.
inline std::optional<double> vertex_enumeration_optimum(
    const lp::LinearProgram& lp) {
  const int n = lp.num_variables();
  const int m = lp.num_rows();
  std::vector<std::vector<double>> cols;  // column-major, width m
  std::vector<double> cost;
  for (int j = 0; j < n; ++j) {
    cols.emplace_back(m, 0.0);
    cost.push_back(lp.objective()[j]);
  }
  for (int i = 0; i < m; ++i) {
    for (const lp::Term& t : lp.row(i).terms) cols[t.index][i] += t.value;
  }
  for (int i = 0; i < m; ++i) {
    const lp::Relation rel = lp.row(i).relation;
    if (rel == lp::Relation::kEqual) continue;
    std::vector<double> s(m, 0.0);
    s[i] = rel == lp::Relation::kLessEqual ? 1.0 : -1.0;
    cols.push_back(s);
    cost.push_back(0.0);
  }
  std::vector<double> rhs(m);
  for (int i = 0; i < m; ++i) rhs[i] = lp.row(i).rhs;

  const int total = static_cast<int>(cols.size());
  const bool maximize = lp.sense() == lp::Sense::kMaximize;
  std::optional<double> best;
  std::vector<int> pick(m);
  for (int i = 0; i < m; ++i) pick[i] = i;
  if (m > total) return best;
  while (true) {
    std::vector<std::vector<double>> a(m, std::vector<double>(m));
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) a[r][c] = cols[pick[c]][r];
    }
    std::vector<double> xb;
    if (solve_square(a, rhs, &xb)) {
      bool feasible = true;
      double value = 0.0;
      for (int c = 0; c < m; ++c) {
        if (xb[c] < -1e-9) feasible = false;
        value += cost[pick[c]] * xb[c];
      }
      if (feasible && (!best || (maximize ? value > *best : value < *best))) {
        best = value;
      }
    }
    int i = m - 1;
    while (i >= 0 && pick[i] == total - m + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int k = i + 1; k < m; ++k) pick[k] = pick[k - 1] + 1;
  }
  return best;
}

// 1-Wasserstein distance between two distributions on sorted scalar points:
// the sum over gaps of |CDF difference| times the gap width.
inline double wasserstein_1d(const std::vector<double>& points,
                             const std::vector<double>& p,
                             const std::vector<double>& q) {
  double cdf = 0.0;
  double total = 0.0;
  for (size_t k = 0; k + 1 < points.size(); ++k) {
    cdf += p[k] - q[k];
    total += std::abs(cdf) * (points[k + 1] - points[k]);
  }
  return total;
}

}  // namespace sagin::testing
