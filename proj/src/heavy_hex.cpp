#include "mbvqe/heavy_hex.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace mbvqe {

HeavyHexLattice HeavyHexLattice::make_abstract(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid must be at least 1x1");
  HeavyHexLattice lat;
  lat.rows = rows;
  lat.cols = cols;
  const int cells = rows * cols;
  const int h_edges = rows * (cols - 1);
  const int v_edges = (rows - 1) * cols;
  // Vertex layout: [0, cells): bottom halves (survivors); [cells, 2c): tops;
  // [2c, 3c): links; then one mid per grid edge (horizontals, then verticals).
  const int top0 = cells, link0 = 2 * cells, mid0 = 3 * cells;
  lat.coupling = Graph(3 * cells + h_edges + v_edges);
  auto bot = [&](int r, int c) { return lat.grid_index(r, c); };
  auto top = [&](int r, int c) { return top0 + lat.grid_index(r, c); };
  auto link = [&](int r, int c) { return link0 + lat.grid_index(r, c); };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      lat.coupling.add_edge(top(r, c), link(r, c));
      lat.coupling.add_edge(link(r, c), bot(r, c));
      lat.cluster_vertex.push_back(bot(r, c));
      lat.merges.push_back({bot(r, c), top(r, c), link(r, c)});
    }
  int mid = mid0;
  // Horizontal grid edge (r,c)-(r,c+1): bottom half hosts "right", the
  // neighbor's top half hosts "left".
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c + 1 < cols; ++c) {
      lat.coupling.add_edge(bot(r, c), mid);
      lat.coupling.add_edge(mid, top(r, c + 1));
      lat.paths.push_back({lat.grid_index(r, c), lat.grid_index(r, c + 1), {mid}});
      ++mid;
    }
  // Vertical grid edge (r,c)-(r+1,c): "down" from the bottom half, "up" into
  // the neighbor's top half.
  for (int r = 0; r + 1 < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      lat.coupling.add_edge(bot(r, c), mid);
      lat.coupling.add_edge(mid, top(r + 1, c));
      lat.paths.push_back({lat.grid_index(r, c), lat.grid_index(r + 1, c), {mid}});
      ++mid;
    }
  return lat;
}

HeavyHexLattice HeavyHexLattice::single_honeycomb() {
  HeavyHexLattice lat;
  lat.rows = 2;
  lat.cols = 2;
  lat.coupling = Graph::cycle(12);
  // Corners at ring positions 0, 2, 6, 8 in grid order (0,0),(0,1),(1,0),(1,1):
  // ring neighbors 0-2 and 6-8 are the horizontal edges, 0-8 and 2-6 vertical.
  lat.cluster_vertex = {0, 2, 8, 6};
  lat.paths.push_back({0, 1, {1}});            // (0,0)-(0,1) via ring 1
  lat.paths.push_back({2, 3, {7}});            // (1,0)-(1,1) via ring 7
  lat.paths.push_back({0, 2, {11, 10, 9}});    // (0,0)-(1,0) via 11,10,9
  lat.paths.push_back({1, 3, {3, 4, 5}});      // (0,1)-(1,1) via 3,4,5
  return lat;
}

HeavyHexLattice HeavyHexLattice::from_json(const nlohmann::json& j) {
  HeavyHexLattice lat;
  const int n = j.at("num_qubits").get<int>();
  lat.coupling = Graph(n);
  for (const auto& e : j.at("edges"))
    lat.coupling.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
  const auto& grid = j.at("grid");
  lat.rows = grid.at("rows").get<int>();
  lat.cols = grid.at("cols").get<int>();
  lat.cluster_vertex = grid.at("cluster_vertices").get<std::vector<int>>();
  if (static_cast<int>(lat.cluster_vertex.size()) != lat.rows * lat.cols)
    throw std::invalid_argument("cluster_vertices must list rows*cols device qubits");
  Graph target = lat.target_grid();
  for (int v : lat.cluster_vertex)
    if (v < 0 || v >= n) throw std::invalid_argument("cluster vertex out of range");
  for (int g = 0; g < lat.rows * lat.cols; ++g)
    if (target.degree(g) > 3)
      throw std::invalid_argument(
          "grid vertices of degree 4 need merge gadgets; use the abstract lattice");
  // Recover vertex-disjoint realization paths, shortest first.
  std::set<int> blocked(lat.cluster_vertex.begin(), lat.cluster_vertex.end());
  for (auto [ga, gb] : target.edges()) {
    int a = lat.cluster_vertex[static_cast<std::size_t>(ga)];
    int b = lat.cluster_vertex[static_cast<std::size_t>(gb)];
    std::set<int> avoid = blocked;
    avoid.erase(a);
    avoid.erase(b);
    std::vector<int> path = lat.coupling.shortest_path(a, b, avoid);
    if (path.size() < 3)
      throw std::invalid_argument("grid does not fit: no disjoint path for an edge");
    std::vector<int> mids(path.begin() + 1, path.end() - 1);
    if (mids.size() % 2 == 0)
      throw std::invalid_argument(
          "grid does not fit: realization path needs an odd number of mid qubits");
    for (int m : mids) blocked.insert(m);
    lat.paths.push_back({ga, gb, mids});
  }
  for (int v = 0; v < n; ++v)
    if (!blocked.count(v)) lat.discards.push_back(v);
  return lat;
}

nlohmann::json HeavyHexLattice::to_json() const {
  nlohmann::json j;
  j["num_qubits"] = coupling.num_vertices();
  auto edges = nlohmann::json::array();
  for (auto [u, v] : coupling.edges()) edges.push_back({u, v});
  j["edges"] = edges;
  j["grid"] = {{"rows", rows}, {"cols", cols}, {"cluster_vertices", cluster_vertex}};
  return j;
}

namespace {

// Physical basis whose effective (vc-conjugated) axis equals `target`.
Pauli basis_for_effective(const GraphWithLC& g, int v, Pauli target) {
  for (int l = 1; l <= 3; ++l) {
    Pauli beta = static_cast<Pauli>(l);
    if (g.vc(v).inverse().image(beta).p == target) return beta;
  }
  throw std::logic_error("no physical basis yields the requested effective axis");
}

}  // namespace

HexClusterPlan hexcluster_pattern(const HeavyHexLattice& device) {
  HexClusterPlan plan;
  plan.cluster_vertex = device.cluster_vertex;
  plan.expected_grid = device.target_grid();

  GraphWithLC dry(device.coupling);
  auto push = [&](int v, Pauli basis, int special) {
    plan.steps.push_back({v, basis, special});
    plan.bases[v] = basis;
    dry.measure(v, basis, 0, nullptr, special);
  };

  // Merge gadgets: fold the doomed half's connections onto the survivor.
  for (const auto& m : device.merges) {
    push(m.link, basis_for_effective(dry, m.link, Pauli::X), m.doomed);
    push(m.doomed, basis_for_effective(dry, m.doomed, Pauli::Z), -1);
  }
  // Discards.
  for (int v : device.discards)
    push(v, basis_for_effective(dry, v, Pauli::Z), -1);
  // Edge paths: contract mids from the a side; intermediate mids use the X
  // rule aimed at the next live mid, stray pendants are cut, the last mid
  // performs the contraction proper.
  for (const auto& path : device.paths) {
    for (std::size_t i = 0; i < path.mids.size(); ++i) {
      const int v = path.mids[i];
      const bool last = (i + 1 == path.mids.size());
      if (last) {
        push(v, basis_for_effective(dry, v, Pauli::Y), -1);
        continue;
      }
      if (dry.graph().degree(v) <= 1) {  // pendant left over by an X rewrite
        push(v, basis_for_effective(dry, v, Pauli::Z), -1);
        continue;
      }
      int next = -1;
      for (std::size_t k = i + 1; k < path.mids.size() && next < 0; ++k)
        if (dry.graph().has_edge(v, path.mids[k])) next = path.mids[k];
      if (next < 0)
        throw std::logic_error("path mid has no live successor to absorb");
      push(v, basis_for_effective(dry, v, Pauli::X), next);
    }
  }

  // The dry run must leave exactly the target grid.
  Graph target = device.target_grid();
  std::map<int, int> grid_of;
  for (int g = 0; g < static_cast<int>(device.cluster_vertex.size()); ++g)
    grid_of[device.cluster_vertex[static_cast<std::size_t>(g)]] = g;
  for (int v : dry.live_vertices())
    if (!grid_of.count(v)) throw std::logic_error("non-cluster vertex survived the plan");
  for (auto [u, v] : target.edges()) {
    if (!dry.graph().has_edge(device.cluster_vertex[static_cast<std::size_t>(u)],
                              device.cluster_vertex[static_cast<std::size_t>(v)]))
      throw std::logic_error("plan dry run did not produce the target grid");
  }
  if (dry.graph().num_edges() != target.num_edges())
    throw std::logic_error("plan dry run left extra edges");
  return plan;
}

HexRunResult run_plan(const HeavyHexLattice& device, const HexClusterPlan& plan,
                      const std::vector<std::uint8_t>* forced, SplitMix64* rng) {
  if (forced && forced->size() != plan.steps.size())
    throw std::invalid_argument("forced outcomes must cover every step");
  HexRunResult out{GraphWithLC(device.coupling), {}};
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const MeasureStep& st = plan.steps[i];
    int want = forced ? (*forced)[i] : kRandomOutcome;
    out.outcomes.push_back(out.state.measure(st.vertex, st.basis, want, rng, st.special));
  }
  return out;
}

HexValidation validate_hex_run(const HeavyHexLattice& device, const HexClusterPlan& plan,
                               const HexRunResult& run) {
  HexValidation v;
  const Graph target = plan.expected_grid;
  const auto& g = run.state;
  // Live set and adjacency must match the grid exactly.
  std::vector<int> live = g.live_vertices();
  std::set<int> expected(plan.cluster_vertex.begin(), plan.cluster_vertex.end());
  if (std::set<int>(live.begin(), live.end()) != expected) {
    v.detail = "surviving vertex set differs from the cluster vertices";
    return v;
  }
  for (int a = 0; a < target.num_vertices(); ++a)
    for (int b = a + 1; b < target.num_vertices(); ++b) {
      bool want = target.has_edge(a, b);
      bool have = g.graph().has_edge(plan.cluster_vertex[static_cast<std::size_t>(a)],
                                     plan.cluster_vertex[static_cast<std::size_t>(b)]);
      if (want != have) {
        v.detail = "adjacency mismatch at grid edge (" + std::to_string(a) + "," +
                   std::to_string(b) + ")";
        return v;
      }
    }
  v.graph_matches = true;
  for (int gidx = 0; gidx < target.num_vertices(); ++gidx) {
    int dev = plan.cluster_vertex[static_cast<std::size_t>(gidx)];
    const SingleQubitClifford& c = g.vc(dev);
    if (!c.is_z_diagonal() || c.z_image().sign != 1) {
      v.detail = "byproduct at grid vertex " + std::to_string(gidx) +
                 " is not Z-diagonal: " + c.name();
      return v;
    }
    const bool rotated = c.pauli_coset() == SingleQubitClifford::sqrt_z(1).pauli_coset();
    if (target.degree(gidx) % 2 == 0 && rotated) {
      v.detail = "even-degree grid vertex " + std::to_string(gidx) +
                 " carries a sqrt(iZ)-class byproduct";
      return v;
    }
    if (target.degree(gidx) % 2 == 1 && !rotated &&
        c.pauli_coset() != SingleQubitClifford::identity().pauli_coset()) {
      v.detail = "unexpected byproduct class at odd-degree vertex";
      return v;
    }
  }
  v.byproducts_confined = true;
  return v;
}

}  // namespace mbvqe
