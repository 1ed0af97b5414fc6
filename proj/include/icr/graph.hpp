#pragma once

#include <utility>
#include <vector>

#include "icr/matrix.hpp"

namespace icr {

/// Undirected graph with one edge per known off-diagonal comparison.
class ComparisonGraph {
 public:
  using Edge = std::pair<int, int>;  // first < second

  /// Throws InvalidArgument on self-loops, out-of-range vertices or duplicates.
  ComparisonGraph(int n, std::vector<Edge> edges);

  int vertex_count() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<int>& neighbours(int v) const { return adjacency_[static_cast<std::size_t>(v)]; }
  bool has_edge(int a, int b) const;

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

ComparisonGraph build_graph(const IncompleteMatrix& matrix);

/// Breadth-first reachability from vertex 0.
bool is_connected(const ComparisonGraph& graph);

bool is_spanning_tree(const ComparisonGraph& graph);

/// Connected components, each sorted, ordered by smallest vertex.
std::vector<std::vector<int>> connected_components(const ComparisonGraph& graph);

/// Vertex sequence of the unique path from `from` to `to` in a tree.
std::vector<int> tree_path(const ComparisonGraph& tree, int from, int to);

/// (n-1)(n-2)/2, the largest number of missing pairs that still admits a
/// connected comparison graph.
int max_missing_for_connectivity(int n);

}  // namespace icr
