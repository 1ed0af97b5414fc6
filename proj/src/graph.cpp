#include "icr/graph.hpp"

#include <algorithm>
#include <queue>

namespace icr {

ComparisonGraph::ComparisonGraph(int n, std::vector<Edge> edges)
    : n_(n), adjacency_(static_cast<std::size_t>(std::max(n, 0))) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "graph needs at least one vertex");
  for (auto& e : edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
    if (e.first == e.second) throw Error(ErrorCode::InvalidArgument, "self-loops are not allowed");
    if (e.first < 0 || e.second >= n) throw Error(ErrorCode::InvalidArgument, "edge vertex out of range");
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw Error(ErrorCode::InvalidArgument, "duplicate edge");
  }
  edges_ = std::move(edges);
  for (const auto& [a, b] : edges_) {
    adjacency_[static_cast<std::size_t>(a)].push_back(b);
    adjacency_[static_cast<std::size_t>(b)].push_back(a);
  }
}

bool ComparisonGraph::has_edge(int a, int b) const {
  if (a > b) std::swap(a, b);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{a, b});
}

ComparisonGraph build_graph(const IncompleteMatrix& matrix) {
  const int n = matrix.size();
  std::vector<ComparisonGraph::Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (matrix.known(i, j)) edges.emplace_back(i, j);
  return ComparisonGraph(n, std::move(edges));
}

namespace {

// Vertices reachable from `start`, with BFS parents (-1 for the root and unreached).
std::vector<int> bfs_parents(const ComparisonGraph& g, int start, std::vector<char>& seen) {
  std::vector<int> parent(static_cast<std::size_t>(g.vertex_count()), -1);
  std::queue<int> q;
  q.push(start);
  seen[static_cast<std::size_t>(start)] = 1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int u : g.neighbours(v)) {
      if (seen[static_cast<std::size_t>(u)]) continue;
      seen[static_cast<std::size_t>(u)] = 1;
      parent[static_cast<std::size_t>(u)] = v;
      q.push(u);
    }
  }
  return parent;
}

}  // namespace

bool is_connected(const ComparisonGraph& graph) {
  std::vector<char> seen(static_cast<std::size_t>(graph.vertex_count()), 0);
  bfs_parents(graph, 0, seen);
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

bool is_spanning_tree(const ComparisonGraph& graph) {
  return graph.edge_count() == static_cast<std::size_t>(graph.vertex_count() - 1) && is_connected(graph);
}

std::vector<std::vector<int>> connected_components(const ComparisonGraph& graph) {
  std::vector<char> seen(static_cast<std::size_t>(graph.vertex_count()), 0);
  std::vector<std::vector<int>> out;
  for (int v = 0; v < graph.vertex_count(); ++v) {
    if (seen[static_cast<std::size_t>(v)]) continue;
    std::vector<char> mark(seen.size(), 0);
    bfs_parents(graph, v, mark);
    std::vector<int> comp;
    for (int u = 0; u < graph.vertex_count(); ++u) {
      if (mark[static_cast<std::size_t>(u)]) {
        comp.push_back(u);
        seen[static_cast<std::size_t>(u)] = 1;
      }
    }
    out.push_back(std::move(comp));
  }
  return out;
}

std::vector<int> tree_path(const ComparisonGraph& tree, int from, int to) {
  std::vector<char> seen(static_cast<std::size_t>(tree.vertex_count()), 0);
  const auto parent = bfs_parents(tree, from, seen);
  if (!seen[static_cast<std::size_t>(to)]) throw Error(ErrorCode::DisconnectedGraph, "vertices are not connected");
  std::vector<int> path{to};
  while (path.back() != from) path.push_back(parent[static_cast<std::size_t>(path.back())]);
  std::reverse(path.begin(), path.end());
  return path;
}

int max_missing_for_connectivity(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be positive");
  return (n - 1) * (n - 2) / 2;
}

}  // namespace icr
