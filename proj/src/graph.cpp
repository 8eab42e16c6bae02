#include "mbvqe/graph.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace mbvqe {

Graph::Graph(int n) : adj_(static_cast<std::size_t>(n)) {
  if (n < 0) throw std::invalid_argument("negative vertex count");
}

void Graph::check(int v) const {
  if (v < 0 || v >= num_vertices()) throw std::out_of_range("vertex out of range");
}

int Graph::num_edges() const {
  int d = 0;
  for (const auto& s : adj_) d += static_cast<int>(s.size());
  return d / 2;
}

void Graph::add_edge(int u, int v) {
  check(u);
  check(v);
  if (u == v) throw std::invalid_argument("self-loop");
  adj_[static_cast<std::size_t>(u)].insert(v);
  adj_[static_cast<std::size_t>(v)].insert(u);
}

void Graph::remove_edge(int u, int v) {
  check(u);
  check(v);
  adj_[static_cast<std::size_t>(u)].erase(v);
  adj_[static_cast<std::size_t>(v)].erase(u);
}

void Graph::toggle_edge(int u, int v) {
  if (has_edge(u, v))
    remove_edge(u, v);
  else
    add_edge(u, v);
}

bool Graph::has_edge(int u, int v) const {
  check(u);
  check(v);
  return adj_[static_cast<std::size_t>(u)].count(v) > 0;
}

void Graph::isolate(int v) {
  check(v);
  auto nbrs = adj_[static_cast<std::size_t>(v)];
  for (int w : nbrs) remove_edge(v, w);
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < num_vertices(); ++u)
    for (int v : adj_[static_cast<std::size_t>(u)])
      if (u < v) out.emplace_back(u, v);
  return out;
}

Graph Graph::path(int n) {
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph Graph::cycle(int n) {
  Graph g = path(n);
  if (n > 2) g.add_edge(n - 1, 0);
  return g;
}

Graph Graph::grid(int rows, int cols) {
  Graph g(rows * cols);
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) g.add_edge(id(r, c), id(r, c + 1));
      if (r + 1 < rows) g.add_edge(id(r, c), id(r + 1, c));
    }
  return g;
}

std::optional<std::vector<int>> Graph::two_coloring() const {
  std::vector<int> color(static_cast<std::size_t>(num_vertices()), -1);
  for (int s = 0; s < num_vertices(); ++s) {
    if (color[static_cast<std::size_t>(s)] != -1) continue;
    color[static_cast<std::size_t>(s)] = 0;
    std::deque<int> q{s};
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int v : neighbors(u)) {
        if (color[static_cast<std::size_t>(v)] == -1) {
          color[static_cast<std::size_t>(v)] = 1 - color[static_cast<std::size_t>(u)];
          q.push_back(v);
        } else if (color[static_cast<std::size_t>(v)] == color[static_cast<std::size_t>(u)]) {
          return std::nullopt;
        }
      }
    }
  }
  return color;
}

std::vector<int> Graph::shortest_path(int u, int v, const std::set<int>& blocked) const {
  check(u);
  check(v);
  std::vector<int> prev(static_cast<std::size_t>(num_vertices()), -2);
  std::deque<int> q{u};
  prev[static_cast<std::size_t>(u)] = -1;
  while (!q.empty()) {
    int a = q.front();
    q.pop_front();
    if (a == v) break;
    for (int b : neighbors(a)) {
      if (prev[static_cast<std::size_t>(b)] != -2) continue;
      if (b != v && blocked.count(b)) continue;
      prev[static_cast<std::size_t>(b)] = a;
      q.push_back(b);
    }
  }
  if (prev[static_cast<std::size_t>(v)] == -2) return {};
  std::vector<int> path;
  for (int a = v; a != -1; a = prev[static_cast<std::size_t>(a)]) path.push_back(a);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace mbvqe
