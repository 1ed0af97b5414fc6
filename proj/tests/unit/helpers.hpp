#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "icr/completion.hpp"
#include "icr/graph.hpp"
#include "icr/matrix.hpp"
#include "oracles.hpp"

namespace testing {

inline oracle::Grid grid(const icr::CompleteMatrix& m) { return m.rows(); }

// Known entries as given, missing ones as 1 (the caller overwrites them).
inline oracle::Grid grid(const icr::IncompleteMatrix& m) {
  oracle::Grid g(m.size(), std::vector<double>(m.size(), 1.0));
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j)
      if (m.known(i, j)) g[i][j] = m.value(i, j);
  return g;
}

inline std::vector<oracle::Cell> missing_cells(const icr::IncompleteMatrix& m) {
  std::vector<oracle::Cell> out;
  for (auto p : m.missing_positions()) out.emplace_back(p.row, p.col);
  return out;
}

inline double scale_draw(std::mt19937_64& gen) {
  return icr::SaatyScale::value(std::uniform_int_distribution<int>(0, icr::SaatyScale::kSize - 1)(gen));
}

// Random scale matrix with m missing pairs and a connected graph.
inline icr::IncompleteMatrix random_connected(std::mt19937_64& gen, int n, int m) {
  for (;;) {
    std::vector<std::vector<std::optional<double>>> raw(n, std::vector<std::optional<double>>(n));
    std::vector<oracle::Cell> upper;
    for (int i = 0; i < n; ++i) {
      raw[i][i] = 1.0;
      for (int j = i + 1; j < n; ++j) upper.emplace_back(i, j);
    }
    std::shuffle(upper.begin(), upper.end(), gen);
    std::vector<oracle::Cell> known(upper.begin() + m, upper.end());
    if (oracle::component_count(n, known) != 1) continue;
    for (auto [i, j] : known) {
      const double v = scale_draw(gen);
      raw[i][j] = v;
      raw[j][i] = 1.0 / v;
    }
    return icr::IncompleteMatrix::validate(raw);
  }
}

// Random spanning tree with off-scale positive weights allowed.
inline icr::IncompleteMatrix random_tree(std::mt19937_64& gen, int n) {
  std::vector<std::vector<std::optional<double>>> raw(n, std::vector<std::optional<double>>(n));
  for (int i = 0; i < n; ++i) raw[i][i] = 1.0;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), gen);
  for (int k = 1; k < n; ++k) {
    const int a = order[k];
    const int b = order[std::uniform_int_distribution<int>(0, k - 1)(gen)];
    const double v = scale_draw(gen);
    raw[a][b] = v;
    raw[b][a] = 1.0 / v;
  }
  return icr::IncompleteMatrix::validate(raw);
}

}  // namespace testing
