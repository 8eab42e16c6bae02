#include "mbvqe/graph_state.hpp"

#include <stdexcept>

namespace mbvqe {

GraphWithLC::GraphWithLC(const Graph& g)
    : g_(g),
      vc_(static_cast<std::size_t>(g.num_vertices())),
      alive_(static_cast<std::size_t>(g.num_vertices()), true) {}

int GraphWithLC::num_live() const {
  int n = 0;
  for (bool b : alive_) n += b ? 1 : 0;
  return n;
}

std::vector<int> GraphWithLC::live_vertices() const {
  std::vector<int> out;
  for (int v = 0; v < num_vertices(); ++v)
    if (alive(v)) out.push_back(v);
  return out;
}

void GraphWithLC::local_complement(int v) {
  if (!alive(v)) throw std::invalid_argument("local complement on deleted vertex");
  const std::vector<int> nbrs(g_.neighbors(v).begin(), g_.neighbors(v).end());
  for (std::size_t i = 0; i < nbrs.size(); ++i)
    for (std::size_t j = i + 1; j < nbrs.size(); ++j) g_.toggle_edge(nbrs[i], nbrs[j]);
  // |tau_v G> = sqrt(-iX_v) (x) sqrt(iZ_N(v)) |G>, so rewriting G -> tau_v(G)
  // composes the inverse onto the vertex Cliffords.
  set_vc(v, vc(v).compose(SingleQubitClifford::sqrt_x(1)));
  for (int w : nbrs) set_vc(w, vc(w).compose(SingleQubitClifford::sqrt_z(-1)));
}

void GraphWithLC::bare_z_measure(int v, int outcome) {
  const std::vector<int> nbrs(g_.neighbors(v).begin(), g_.neighbors(v).end());
  g_.isolate(v);
  if (outcome == 1)
    for (int w : nbrs)
      set_vc(w, vc(w).compose(SingleQubitClifford::pauli(Pauli::Z)));
  alive_[static_cast<std::size_t>(v)] = false;
}

void GraphWithLC::bare_y_measure(int v, int outcome) {
  const std::vector<int> nbrs(g_.neighbors(v).begin(), g_.neighbors(v).end());
  // Local complement at v, then delete; neighbors pick up sqrt(-+ iZ).
  for (std::size_t i = 0; i < nbrs.size(); ++i)
    for (std::size_t j = i + 1; j < nbrs.size(); ++j) g_.toggle_edge(nbrs[i], nbrs[j]);
  g_.isolate(v);
  const SingleQubitClifford u = SingleQubitClifford::sqrt_z(outcome == 0 ? -1 : 1);
  for (int w : nbrs) set_vc(w, vc(w).compose(u));
  alive_[static_cast<std::size_t>(v)] = false;
}

MeasurementOutcome GraphWithLC::measure(int v, Pauli axis, int forced,
                                        SplitMix64* rng, int special_hint) {
  if (axis == Pauli::I) throw std::invalid_argument("measurement axis must be X, Y or Z");
  if (!alive(v)) throw std::invalid_argument("measuring deleted vertex");
  // Commute the projector through vc_v: P_{a,s} vc = vc P_{b,s'}, where
  // b (signed) = vc^dagger a vc.
  const SignedPauli eff = vc(v).inverse().image(axis);
  const Pauli b = eff.p;
  const int sflip = eff.sign < 0 ? 1 : 0;

  if (g_.degree(v) == 0) {
    // Direct projection of vc|+>: an effective X is deterministic, Y/Z are
    // fair coin flips.
    int physical;
    double prob;
    if (b == Pauli::X) {
      physical = sflip;
      prob = 1.0;
      if (forced != kRandomOutcome && forced != physical)
        throw std::runtime_error("forced measurement branch has zero probability");
    } else {
      prob = 0.5;
      if (forced == kRandomOutcome) {
        if (rng == nullptr) throw std::invalid_argument("random outcome requires rng");
        physical = rng->next_bit() ? 1 : 0;
      } else {
        physical = forced;
      }
    }
    alive_[static_cast<std::size_t>(v)] = false;
    return {v, std::nan(""), physical, prob};
  }

  int physical;
  if (forced == kRandomOutcome) {
    if (rng == nullptr) throw std::invalid_argument("random outcome requires rng");
    physical = rng->next_bit() ? 1 : 0;
  } else {
    physical = forced;
  }
  const int bare = physical ^ sflip;

  switch (b) {
    case Pauli::Z:
      bare_z_measure(v, bare);
      break;
    case Pauli::Y:
      bare_y_measure(v, bare);
      break;
    case Pauli::X: {
      int sp = special_hint;
      if (sp < 0) sp = *g_.neighbors(v).begin();
      if (!alive(sp) || !g_.has_edge(v, sp))
        throw std::invalid_argument("special neighbor must be a live neighbor");
      // Measuring X on |G> equals measuring the conjugated axis on the
      // locally complemented graph; the vc update of local_complement turns
      // this measurement into an effective Y at v.
      local_complement(sp);
      measure(v, axis, physical, nullptr, -1);
      local_complement(sp);
      break;
    }
    default:
      throw std::invalid_argument("measurement axis must be X, Y or Z");
  }
  return {v, std::nan(""), physical, 0.5};
}

std::vector<int> GraphWithLC::live_axis_map() const {
  std::vector<int> axis(static_cast<std::size_t>(num_vertices()), -1);
  int k = 0;
  for (int v = 0; v < num_vertices(); ++v)
    if (alive(v)) axis[static_cast<std::size_t>(v)] = k++;
  return axis;
}

StateVector GraphWithLC::to_statevector(int max_qubits) const {
  const std::vector<int> live = live_vertices();
  Graph sub(static_cast<int>(live.size()));
  std::vector<int> axis = live_axis_map();
  for (auto [u, v] : g_.edges())
    if (alive(u) && alive(v))
      sub.add_edge(axis[static_cast<std::size_t>(u)], axis[static_cast<std::size_t>(v)]);
  StateVector s = prepare_graph_state(sub, {}, max_qubits);
  for (int v : live)
    if (!vc(v).is_identity())
      apply_clifford(s, vc(v), axis[static_cast<std::size_t>(v)]);
  return s;
}

std::vector<std::pair<PauliString, int>> adjusted_stabilizers(const GraphWithLC& g) {
  const std::vector<int> live = g.live_vertices();
  const std::vector<int> axis = g.live_axis_map();
  std::vector<std::pair<PauliString, int>> out;
  for (int v : live) {
    if (g.vc(v).pauli_coset() != SingleQubitClifford::identity().pauli_coset() &&
        g.vc(v).pauli_coset() != SingleQubitClifford::sqrt_z(1).pauli_coset())
      throw std::runtime_error("byproduct outside {I, Z, sqrt(+-iZ)} at vertex " +
                               std::to_string(v));
  }
  const int n = static_cast<int>(live.size());
  for (int v : live) {
    PauliString s = PauliString::single(n, axis[static_cast<std::size_t>(v)], Pauli::X);
    for (int w : g.graph().neighbors(v)) {
      if (!g.alive(w)) continue;
      s.set_letter(axis[static_cast<std::size_t>(w)], Pauli::Z);
    }
    for (int w : live) s = conjugate(g.vc(w), s, axis[static_cast<std::size_t>(w)]);
    int sign = s.phase_power() == 0 ? 1 : (s.phase_power() == 2 ? -1 : 0);
    if (sign == 0) throw std::runtime_error("adjusted stabilizer has imaginary phase");
    s.set_phase_power(0);
    out.emplace_back(s, sign);
  }
  return out;
}

}  // namespace mbvqe
