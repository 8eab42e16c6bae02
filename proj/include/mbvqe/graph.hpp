#pragma once

#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace mbvqe {

/// Simple undirected graph over vertices 0..n-1. No self-loops.
class Graph {
 public:
  explicit Graph(int n = 0);

  int num_vertices() const { return static_cast<int>(adj_.size()); }
  int num_edges() const;
  void add_edge(int u, int v);
  void remove_edge(int u, int v);
  void toggle_edge(int u, int v);
  bool has_edge(int u, int v) const;
  void isolate(int v);  // drop all edges at v
  const std::set<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  int degree(int v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }
  std::vector<std::pair<int, int>> edges() const;  // u < v

  static Graph path(int n);
  static Graph cycle(int n);
  static Graph grid(int rows, int cols);

  /// BFS 2-coloring; nullopt when not bipartite. Isolated vertices get 0.
  std::optional<std::vector<int>> two_coloring() const;

  /// Shortest path u -> v avoiding `blocked` vertices (endpoints exempt);
  /// empty when unreachable.
  std::vector<int> shortest_path(int u, int v, const std::set<int>& blocked = {}) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  void check(int v) const;
  std::vector<std::set<int>> adj_;
};

}  // namespace mbvqe
