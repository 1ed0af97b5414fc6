// Test-side reference computations. Deliberately independent of the library:
// dense eigen-decomposition, closed forms, brute-force grids, union-find.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Grid = std::vector<std::vector<double>>;
using Cell = std::pair<int, int>;

// Largest real eigenvalue via a full nonsymmetric eigensolver.
inline double perron(const Grid& a) {
  const int n = static_cast<int>(a.size());
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = a[i][j];
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  double best = -1e300;
  for (int k = 0; k < n; ++k) {
    const auto ev = es.eigenvalues()[k];
    if (std::abs(ev.imag()) < 1e-9 * std::max(1.0, std::abs(ev.real()))) best = std::max(best, ev.real());
  }
  return best;
}

// 3x3 reciprocal matrix with a12 = a, a13 = b, a23 = c: the characteristic
// polynomial is l^3 - 3l^2 - (k + 1/k - 2) with k = ac/b, whose largest root
// is 1 + k^(1/3) + k^(-1/3).
inline double lambda3(double a, double b, double c) {
  const double k = a * c / b;
  return 1.0 + std::cbrt(k) + 1.0 / std::cbrt(k);
}

// Plain power iteration, used only where the dense solver is too slow.
inline double power_lambda(const Grid& a) {
  const std::size_t n = a.size();
  std::vector<double> w(n, 1.0 / static_cast<double>(n)), next(n);
  double lambda = 0.0;
  for (int it = 0; it < 100000; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += a[i][j] * w[j];
      next[i] = s;
    }
    const double sum = std::accumulate(next.begin(), next.end(), 0.0);
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= sum;
      diff = std::max(diff, std::abs(next[i] - w[i]));
    }
    w.swap(next);
    lambda = sum;
    if (diff < 1e-14) break;
  }
  return lambda;
}

// A with the listed missing cells (i < j) set to exp(y_k) and reciprocals.
inline Grid fill(Grid a, const std::vector<Cell>& cells, const std::vector<double>& y) {
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto [i, j] = cells[k];
    a[i][j] = std::exp(y[k]);
    a[j][i] = std::exp(-y[k]);
  }
  return a;
}

// Minimum of lambda_max over y in [lo, hi]^m (m = 1 or 2) by repeated grid
// refinement: a 2000-point grid for m = 1, 61x61 for m = 2, each pass zooming
// into two cells around the best point.
inline double grid_min(const Grid& a, const std::vector<Cell>& cells, double lo, double hi) {
  const std::size_t m = cells.size();
  const int points = m == 1 ? 2000 : 61;
  std::vector<double> l(m, lo), h(m, hi), best(m, 0.0);
  double best_val = 1e300;
  for (int pass = 0; pass < (m == 1 ? 4 : 14); ++pass) {
    std::vector<double> step(m);
    for (std::size_t d = 0; d < m; ++d) step[d] = (h[d] - l[d]) / (points - 1);
    std::vector<double> y(m);
    if (m == 1) {
      for (int p = 0; p < points; ++p) {
        y[0] = l[0] + p * step[0];
        const double v = power_lambda(fill(a, cells, y));
        if (v < best_val) best_val = v, best = y;
      }
    } else {
      for (int p = 0; p < points; ++p)
        for (int q = 0; q < points; ++q) {
          y[0] = l[0] + p * step[0];
          y[1] = l[1] + q * step[1];
          const double v = power_lambda(fill(a, cells, y));
          if (v < best_val) best_val = v, best = y;
        }
    }
    for (std::size_t d = 0; d < m; ++d) {
      l[d] = std::max(lo, best[d] - 2 * step[d]);
      h[d] = std::min(hi, best[d] + 2 * step[d]);
    }
  }
  return best_val;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int root(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(int a, int b) { parent[root(a)] = root(b); }
};

inline int component_count(int n, const std::vector<Cell>& edges) {
  UnionFind uf(n);
  for (auto [a, b] : edges) uf.join(a, b);
  int count = 0;
  for (int v = 0; v < n; ++v) count += uf.root(v) == v;
  return count;
}

inline bool consistent(const Grid& a, double rel_tol) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (std::abs(a[i][k] - a[i][j] * a[j][k]) > rel_tol * a[i][k]) return false;
  return true;
}

}  // namespace oracle
