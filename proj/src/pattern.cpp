#include "mbvqe/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

namespace mbvqe {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

bool OpenGraph::is_output(int v) const {
  return std::find(outputs.begin(), outputs.end(), v) != outputs.end();
}

std::vector<int> MeasurementPattern::measurement_order() const {
  std::vector<int> order;
  for (const auto& layer : layers)
    for (int v : layer) order.push_back(v);
  return order;
}

MeasurementPattern node_wise_pattern(const Graph& ansatz, int layers) {
  if (layers < 0) throw std::invalid_argument("negative layer count");
  const int n = ansatz.num_vertices();
  MeasurementPattern p;
  Graph g(n * (layers + 1));
  for (int k = 0; k <= layers; ++k) {
    for (auto [u, v] : ansatz.edges()) g.add_edge(k * n + u, k * n + v);
    if (k > 0)
      for (int i = 0; i < n; ++i) g.add_edge(k * n + i, (k - 1) * n + i);
  }
  p.og.g = g;
  for (int i = 0; i < n; ++i) p.og.outputs.push_back(i);
  for (int k = layers; k >= 1; --k) {
    std::vector<int> layer;
    for (int i = 0; i < n; ++i) {
      int v = k * n + i;
      layer.push_back(v);
      p.measure[v] = MeasureSpec{(layers - k) * n + i, 0};
    }
    p.layers.push_back(layer);
  }
  p.num_params = n * layers;
  p.node_wise = MeasurementPattern::NodeWiseInfo{n, layers, ansatz};
  return p;
}

MeasurementPattern edge_wise_pattern(const Graph& ansatz) {
  const int n = ansatz.num_vertices();
  const auto edges = ansatz.edges();
  MeasurementPattern p;
  Graph g(n + 4 * static_cast<int>(edges.size()));
  for (auto [u, v] : edges) g.add_edge(u, v);
  std::vector<int> outer, inner;
  int next = n;
  int param = 0;
  for (auto [u, v] : edges) {
    for (int end : {u, v}) {
      int in = next++, out = next++;
      g.add_edge(end, in);
      g.add_edge(in, out);
      inner.push_back(in);
      outer.push_back(out);
    }
  }
  p.og.g = g;
  for (int i = 0; i < n; ++i) p.og.outputs.push_back(i);
  for (int v : outer) p.measure[v] = MeasureSpec{param++, 0};
  for (int v : inner) p.measure[v] = MeasureSpec{param++, 0};
  p.layers.push_back(outer);
  p.layers.push_back(inner);
  p.num_params = param;
  return p;
}

MeasurementPattern tree_pattern() {
  // Parent 0, mid qubits 1 and 2 (connected to each other), outputs 3..6.
  // Output order matches the periodic Hamiltonian's site order 1..4.
  MeasurementPattern p;
  Graph g(7);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  g.add_edge(1, 2);
  g.add_edge(1, 3);
  g.add_edge(1, 4);
  g.add_edge(2, 5);
  g.add_edge(2, 6);
  p.og.g = g;
  p.og.outputs = {3, 4, 5, 6};
  p.measure[0] = MeasureSpec{0, 0};
  p.measure[1] = MeasureSpec{1, 0};
  p.measure[2] = MeasureSpec{2, 0};
  p.layers = {{0}, {1, 2}};
  p.num_params = 3;
  return p;
}

std::optional<FlowMap> find_causal_flow(const OpenGraph& og) {
  const int n = og.g.num_vertices();
  std::vector<bool> solved(static_cast<std::size_t>(n), false);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  FlowMap flow;
  int remaining = 0;
  for (int v = 0; v < n; ++v) {
    if (og.is_output(v)) {
      solved[static_cast<std::size_t>(v)] = true;
      flow.depth[v] = 0;
    } else {
      ++remaining;
    }
  }
  int k = 0;
  while (remaining > 0) {
    ++k;
    std::vector<std::pair<int, int>> found;  // (v, corrector)
    for (int c = 0; c < n; ++c) {
      if (!solved[static_cast<std::size_t>(c)] || used[static_cast<std::size_t>(c)]) continue;
      int unsolved = -1;
      bool unique = true;
      for (int w : og.g.neighbors(c)) {
        if (solved[static_cast<std::size_t>(w)]) continue;
        if (unsolved != -1) {
          unique = false;
          break;
        }
        unsolved = w;
      }
      if (unique && unsolved != -1) found.emplace_back(unsolved, c);
    }
    bool progress = false;
    for (auto [v, c] : found) {
      if (solved[static_cast<std::size_t>(v)]) continue;  // claimed this round
      solved[static_cast<std::size_t>(v)] = true;
      used[static_cast<std::size_t>(c)] = true;
      flow.f[v] = c;
      flow.depth[v] = k;
      --remaining;
      progress = true;
    }
    if (!progress) return std::nullopt;
  }
  return flow;
}

bool flow_is_valid(const OpenGraph& og, const FlowMap& flow) {
  for (int v = 0; v < og.g.num_vertices(); ++v) {
    if (og.is_output(v)) continue;
    auto it = flow.f.find(v);
    if (it == flow.f.end()) return false;
    int c = it->second;
    if (!og.g.has_edge(v, c)) return false;
    if (flow.depth.at(c) >= flow.depth.at(v)) return false;
    for (int w : og.g.neighbors(c))
      if (w != v && flow.depth.at(w) >= flow.depth.at(v)) return false;
  }
  // f injective.
  std::set<int> images;
  for (auto [v, c] : flow.f)
    if (!images.insert(c).second) return false;
  return true;
}

namespace {

// Assign depths from the precedence constraints of a candidate successor
// function; nullopt when the constraints are cyclic.
std::optional<std::map<int, int>> depths_from_f(const OpenGraph& og,
                                                const std::map<int, int>& f) {
  const int n = og.g.num_vertices();
  // Edge u -> v meaning "u measured before v" (v later).
  std::vector<std::vector<int>> later(static_cast<std::size_t>(n));
  for (auto [v, c] : f) {
    later[static_cast<std::size_t>(v)].push_back(c);
    for (int w : og.g.neighbors(c))
      if (w != v) later[static_cast<std::size_t>(v)].push_back(w);
  }
  // depth(v) = 1 + max depth over "later" targets; outputs 0; cycle -> fail.
  std::vector<int> depth(static_cast<std::size_t>(n), -1);
  std::vector<int> state(static_cast<std::size_t>(n), 0);
  std::function<bool(int)> visit = [&](int v) -> bool {
    if (state[static_cast<std::size_t>(v)] == 1) return false;
    if (state[static_cast<std::size_t>(v)] == 2) return true;
    state[static_cast<std::size_t>(v)] = 1;
    int d = 0;
    for (int w : later[static_cast<std::size_t>(v)]) {
      if (!visit(w)) return false;
      d = std::max(d, depth[static_cast<std::size_t>(w)] + 1);
    }
    depth[static_cast<std::size_t>(v)] = d;
    state[static_cast<std::size_t>(v)] = 2;
    return true;
  };
  for (int v = 0; v < n; ++v)
    if (!visit(v)) return std::nullopt;
  std::map<int, int> out;
  for (int v = 0; v < n; ++v) out[v] = depth[static_cast<std::size_t>(v)];
  return out;
}

}  // namespace

std::optional<FlowMap> exhaustive_flow_search(const OpenGraph& og) {
  std::vector<int> measured;
  for (int v = 0; v < og.g.num_vertices(); ++v)
    if (!og.is_output(v)) measured.push_back(v);
  std::map<int, int> f;
  std::set<int> used;
  std::optional<FlowMap> result;
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == measured.size()) {
      auto depths = depths_from_f(og, f);
      if (!depths) return false;
      FlowMap flow;
      flow.f = f;
      flow.depth = *depths;
      if (!flow_is_valid(og, flow)) return false;
      result = flow;
      return true;
    }
    int v = measured[i];
    for (int c : og.g.neighbors(v)) {
      if (used.count(c)) continue;
      f[v] = c;
      used.insert(c);
      if (rec(i + 1)) return true;
      used.erase(c);
      f.erase(v);
    }
    return false;
  };
  rec(0);
  return result;
}

CorrectionSets corrections_from_flow(const OpenGraph& og, const FlowMap& flow) {
  CorrectionSets cs;
  for (auto [v, c] : flow.f) {
    cs.x_target[v] = c;
    std::vector<int> zt;
    for (int w : og.g.neighbors(c))
      if (w != v) zt.push_back(w);
    cs.z_targets[v] = zt;
  }
  return cs;
}

bool PauliFrame::is_identity() const {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] || z[i]) return false;
  return true;
}

PauliSum apply_frame(const PauliSum& h, const PauliFrame& frame) {
  if (static_cast<int>(frame.x.size()) != h.num_qubits())
    throw std::invalid_argument("frame size mismatch");
  PauliSum out(h.num_qubits());
  for (const auto& [c, t] : h.terms()) {
    int sign = 0;
    for (int q = 0; q < h.num_qubits(); ++q) {
      Pauli p = t.letter(q);
      bool anti_x = (p == Pauli::Y || p == Pauli::Z);
      bool anti_z = (p == Pauli::X || p == Pauli::Y);
      sign ^= (frame.x[static_cast<std::size_t>(q)] & (anti_x ? 1 : 0)) ^
              (frame.z[static_cast<std::size_t>(q)] & (anti_z ? 1 : 0));
    }
    out.add(sign ? -c : c, t);
  }
  return out;
}

void apply_frame_to_state(StateVector& s, const PauliFrame& frame) {
  if (static_cast<int>(frame.x.size()) != s.num_qubits())
    throw std::invalid_argument("frame size mismatch");
  for (int q = 0; q < s.num_qubits(); ++q) {
    if (frame.x[static_cast<std::size_t>(q)]) apply_pauli(s, Pauli::X, q);
    if (frame.z[static_cast<std::size_t>(q)]) apply_pauli(s, Pauli::Z, q);
  }
}

namespace {

struct RunOutcome {
  StateVector state;
  PauliFrame frame;
  std::vector<std::uint8_t> outcomes;
  double probability;
};

RunOutcome run_once(const MeasurementPattern& p, std::span<const double> angles,
                    const CorrectionSets* cs, const std::vector<std::uint8_t>* forced,
                    SplitMix64* rng, int max_active) {
  const OpenGraph& og = p.og;
  const int n = og.g.num_vertices();
  std::vector<int> axis(static_cast<std::size_t>(n), -1);
  std::vector<char> active(static_cast<std::size_t>(n), 0);
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  std::vector<std::uint8_t> sx(static_cast<std::size_t>(n), 0),
      sz(static_cast<std::size_t>(n), 0);
  StateVector s(0, max_active);

  // Edges into a measured vertex were applied before it was contracted, so
  // finished vertices are simply skipped.
  auto activate = [&](int v) {
    if (active[static_cast<std::size_t>(v)] || done[static_cast<std::size_t>(v)]) return;
    s.append_plus_qubit();
    axis[static_cast<std::size_t>(v)] = s.num_qubits() - 1;
    active[static_cast<std::size_t>(v)] = 1;
    for (int w : og.g.neighbors(v))
      if (active[static_cast<std::size_t>(w)])
        apply_cz(s, axis[static_cast<std::size_t>(v)], axis[static_cast<std::size_t>(w)]);
  };

  RunOutcome out{StateVector(0, max_active), {}, {}, 1.0};
  for (int v : p.measurement_order()) {
    activate(v);
    for (int w : og.g.neighbors(v)) activate(w);
    const MeasureSpec& spec = p.measure.at(v);
    double base = spec.is_parametric() ? angles[static_cast<std::size_t>(spec.param)]
                                       : spec.fixed_angle;
    double actual = (sx[static_cast<std::size_t>(v)] ? -base : base) +
                    (sz[static_cast<std::size_t>(v)] ? kPi : 0.0);
    int want = kRandomOutcome;
    if (forced) want = (*forced)[out.outcomes.size()];
    MeasurementOutcome mo = measure_xy(s, axis[static_cast<std::size_t>(v)], actual, want, rng);
    const int removed = axis[static_cast<std::size_t>(v)];
    for (int u = 0; u < n; ++u)
      if (axis[static_cast<std::size_t>(u)] > removed) --axis[static_cast<std::size_t>(u)];
    axis[static_cast<std::size_t>(v)] = -1;
    active[static_cast<std::size_t>(v)] = 0;
    done[static_cast<std::size_t>(v)] = 1;
    out.outcomes.push_back(static_cast<std::uint8_t>(mo.bit));
    out.probability *= mo.probability;
    if (mo.bit && cs) {
      sx[static_cast<std::size_t>(cs->x_target.at(v))] ^= 1;
      for (int w : cs->z_targets.at(v)) sz[static_cast<std::size_t>(w)] ^= 1;
    }
  }
  for (int o : og.outputs) activate(o);
  if (s.num_qubits() != static_cast<int>(og.outputs.size()))
    throw std::logic_error("pattern left non-output qubits unmeasured");

  // Permute axes into the declared output order.
  const int m = static_cast<int>(og.outputs.size());
  std::vector<int> pos(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k)
    pos[static_cast<std::size_t>(k)] = axis[static_cast<std::size_t>(og.outputs[static_cast<std::size_t>(k)])];
  StateVector permuted(m, std::max(max_active, m));
  auto& dst = permuted.amplitudes();
  const auto& src = s.amplitudes();
  for (long j = 0; j < dst.size(); ++j) {
    long i = 0;
    for (int k = 0; k < m; ++k)
      if (j & (1L << k)) i |= 1L << pos[static_cast<std::size_t>(k)];
    dst(j) = src(i);
  }
  out.state = std::move(permuted);
  out.frame.x.resize(static_cast<std::size_t>(m));
  out.frame.z.resize(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    out.frame.x[static_cast<std::size_t>(k)] = sx[static_cast<std::size_t>(og.outputs[static_cast<std::size_t>(k)])];
    out.frame.z[static_cast<std::size_t>(k)] = sz[static_cast<std::size_t>(og.outputs[static_cast<std::size_t>(k)])];
  }
  return out;
}

}  // namespace

ExecutionResult execute(const MeasurementPattern& p, std::span<const double> angles,
                        ExecMode mode, const std::vector<std::uint8_t>* forced,
                        SplitMix64* rng, int max_active) {
  if (static_cast<int>(angles.size()) != p.num_params)
    throw std::invalid_argument("angle vector length mismatch");
  std::optional<FlowMap> flow = find_causal_flow(p.og);
  std::optional<CorrectionSets> cs;
  if (flow) cs = corrections_from_flow(p.og, *flow);

  switch (mode) {
    case ExecMode::Forced: {
      if (!forced || forced->size() != p.measure.size())
        throw std::invalid_argument("forced mode requires an outcome per measured qubit");
      RunOutcome r = run_once(p, angles, cs ? &*cs : nullptr, forced, nullptr, max_active);
      return {std::move(r.state), std::move(r.frame), std::move(r.outcomes), 1, r.probability};
    }
    case ExecMode::Adaptive: {
      if (!cs) throw std::invalid_argument("adaptive mode requires a causal flow");
      if (!rng) throw std::invalid_argument("adaptive mode requires an rng");
      RunOutcome r = run_once(p, angles, &*cs, nullptr, rng, max_active);
      return {std::move(r.state), std::move(r.frame), std::move(r.outcomes), 1, r.probability};
    }
    case ExecMode::PostselectAllPlus: {
      if (!rng) throw std::invalid_argument("postselect mode requires an rng");
      const int k = p.num_measured();
      const std::uint64_t limit =
          k < 28 ? 10ULL * (1ULL << k) : 0xffffffffffffffffULL;
      for (std::uint64_t attempt = 1; attempt <= limit; ++attempt) {
        RunOutcome r = run_once(p, angles, nullptr, nullptr, rng, max_active);
        bool all_plus = std::all_of(r.outcomes.begin(), r.outcomes.end(),
                                    [](std::uint8_t b) { return b == 0; });
        if (all_plus)
          return {std::move(r.state), std::move(r.frame), std::move(r.outcomes),
                  static_cast<int>(attempt), r.probability};
      }
      throw std::runtime_error("postselection retry limit exceeded");
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<CircuitGate> equivalent_circuit(const MeasurementPattern& p,
                                            std::span<const double> angles) {
  if (!p.node_wise) throw std::invalid_argument("pattern is not node-wise");
  if (static_cast<int>(angles.size()) != p.num_params)
    throw std::invalid_argument("angle vector length mismatch");
  const auto& info = *p.node_wise;
  std::vector<CircuitGate> gates;
  auto cz_layer = [&] {
    for (auto [u, v] : info.ansatz.edges())
      gates.push_back({CircuitGate::Kind::CZ, u, v, 0});
  };
  cz_layer();
  for (int k = info.l; k >= 1; --k) {
    for (int i = 0; i < info.n; ++i) {
      double theta = angles[static_cast<std::size_t>((info.l - k) * info.n + i)];
      gates.push_back({CircuitGate::Kind::Phase, i, -1, theta});
      gates.push_back({CircuitGate::Kind::H, i, -1, 0});
    }
    cz_layer();
  }
  return gates;
}

StateVector simulate_circuit(const std::vector<CircuitGate>& gates, int n,
                             int max_qubits) {
  StateVector s = StateVector::all_plus(n, max_qubits);
  for (const auto& g : gates) {
    switch (g.kind) {
      case CircuitGate::Kind::H: apply_h(s, g.a); break;
      case CircuitGate::Kind::CZ: apply_cz(s, g.a, g.b); break;
      case CircuitGate::Kind::Phase: apply_phase(s, g.theta, g.a); break;
    }
  }
  return s;
}

}  // namespace mbvqe
