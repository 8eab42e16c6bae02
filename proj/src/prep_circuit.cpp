#include "mbvqe/prep_circuit.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace mbvqe {

int cnot_depth_of(const std::vector<PrepGate>& gates, int num_qubits) {
  std::vector<int> depth(static_cast<std::size_t>(num_qubits), 0);
  int max_depth = 0;
  for (const auto& g : gates) {
    int w = 0;
    if (g.kind == PrepGate::Kind::CZ) w = 1;
    if (g.kind == PrepGate::Kind::Swap) w = 3;
    if (g.b < 0) continue;  // single-qubit gates carry no CNOTs
    int d = std::max(depth[static_cast<std::size_t>(g.a)],
                     depth[static_cast<std::size_t>(g.b)]) + w;
    depth[static_cast<std::size_t>(g.a)] = d;
    depth[static_cast<std::size_t>(g.b)] = d;
    max_depth = std::max(max_depth, d);
  }
  return max_depth;
}

namespace {

// Greedy proper edge coloring: smallest color free at both endpoints.
std::map<std::pair<int, int>, int> greedy_coloring(const Graph& g) {
  std::map<std::pair<int, int>, int> color;
  std::vector<std::set<int>> used(static_cast<std::size_t>(g.num_vertices()));
  for (auto e : g.edges()) {
    int c = 0;
    while (used[static_cast<std::size_t>(e.first)].count(c) ||
           used[static_cast<std::size_t>(e.second)].count(c))
      ++c;
    color[e] = c;
    used[static_cast<std::size_t>(e.first)].insert(c);
    used[static_cast<std::size_t>(e.second)].insert(c);
  }
  return color;
}

// Structural 4-coloring of the synthetic paired lattice:
//   A: top-link edges and bottom halves of vertical grid edges,
//   B: link-bottom edges and top halves of vertical grid edges,
//   C: bottom halves of horizontal grid edges,
//   D: top halves of horizontal grid edges.
std::optional<std::map<std::pair<int, int>, int>> structural_coloring(
    const HeavyHexLattice& lat) {
  if (lat.merges.size() != static_cast<std::size_t>(lat.rows * lat.cols))
    return std::nullopt;  // not the synthetic layout
  std::map<std::pair<int, int>, int> color;
  auto key = [](int u, int v) { return std::make_pair(std::min(u, v), std::max(u, v)); };
  for (const auto& m : lat.merges) {
    color[key(m.doomed, m.link)] = 0;
    color[key(m.link, m.survivor)] = 1;
  }
  for (const auto& p : lat.paths) {
    if (p.mids.size() != 1) return std::nullopt;
    const bool horizontal = (p.grid_b == p.grid_a + 1);
    int a = lat.cluster_vertex[static_cast<std::size_t>(p.grid_a)];  // bottom half
    int doomed_b = -1;
    for (const auto& m : lat.merges)
      if (m.survivor == lat.cluster_vertex[static_cast<std::size_t>(p.grid_b)])
        doomed_b = m.doomed;
    color[key(a, p.mids[0])] = horizontal ? 2 : 0;
    color[key(p.mids[0], doomed_b)] = horizontal ? 3 : 1;
  }
  if (color.size() != static_cast<std::size_t>(lat.coupling.num_edges()))
    return std::nullopt;
  return color;
}

}  // namespace

PrepCircuit prep_circuit_mb(const HeavyHexLattice& device) {
  PrepCircuit c;
  c.num_qubits = device.coupling.num_vertices();
  for (int q = 0; q < c.num_qubits; ++q)
    c.gates.push_back({PrepGate::Kind::H, q, -1, 0});
  auto coloring = structural_coloring(device);
  if (!coloring) coloring = greedy_coloring(device.coupling);
  std::vector<std::pair<std::pair<int, int>, int>> order(coloring->begin(), coloring->end());
  std::sort(order.begin(), order.end(),
            [](const auto& x, const auto& y) { return x.second < y.second; });
  for (const auto& [e, col] : order)
    c.gates.push_back({PrepGate::Kind::CZ, e.first, e.second, col + 1});
  c.cnot_count = device.coupling.num_edges();
  c.cnot_depth = cnot_depth_of(c.gates, c.num_qubits);
  return c;
}

PrepCircuit prep_circuit_naive(const HeavyHexLattice& device) {
  PrepCircuit c;
  c.num_qubits = device.coupling.num_vertices();
  const Graph target = device.target_grid();
  // Logical cluster qubit -> physical device qubit, updated by swaps.
  std::vector<int> phys = device.cluster_vertex;
  for (int q = 0; q < c.num_qubits; ++q)
    c.gates.push_back({PrepGate::Kind::H, q, -1, 0});
  int layer = 1;
  for (auto [la, lb] : target.edges()) {
    int a = phys[static_cast<std::size_t>(la)];
    int b = phys[static_cast<std::size_t>(lb)];
    std::vector<int> path = device.coupling.shortest_path(a, b);
    if (path.empty()) throw std::invalid_argument("coupling graph is disconnected");
    // Swap logical a along the path until adjacent to b.
    for (std::size_t i = 0; i + 2 < path.size(); ++i) {
      c.gates.push_back({PrepGate::Kind::Swap, path[i], path[i + 1], layer++});
      for (auto& p : phys) {
        if (p == path[i])
          p = path[i + 1];
        else if (p == path[i + 1])
          p = path[i];
      }
    }
    c.gates.push_back(
        {PrepGate::Kind::CZ, path[path.size() - 2], path.back(), layer++});
    c.cnot_count += 3 * (static_cast<int>(path.size()) - 2) + 1;
  }
  c.cnot_depth = cnot_depth_of(c.gates, c.num_qubits);
  return c;
}

}  // namespace mbvqe
