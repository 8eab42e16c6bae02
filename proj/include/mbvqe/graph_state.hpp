#pragma once

#include <vector>

#include "mbvqe/clifford.hpp"
#include "mbvqe/graph.hpp"
#include "mbvqe/rng.hpp"
#include "mbvqe/statevector.hpp"

namespace mbvqe {

/// Graph state decorated with per-vertex single-qubit Cliffords (byproduct /
/// vertex corrections). The represented state is (tensor_v vc_v)|G> over the
/// live vertices; measured vertices are deleted. All rewriting keeps the
/// represented statevector fixed up to a global phase.
class GraphWithLC {
 public:
  explicit GraphWithLC(const Graph& g);

  int num_vertices() const { return g_.num_vertices(); }
  bool alive(int v) const { return alive_[static_cast<std::size_t>(v)]; }
  int num_live() const;
  std::vector<int> live_vertices() const;
  const Graph& graph() const { return g_; }
  const SingleQubitClifford& vc(int v) const { return vc_[static_cast<std::size_t>(v)]; }
  void set_vc(int v, const SingleQubitClifford& c) { vc_[static_cast<std::size_t>(v)] = c; }

  /// Edge complement of N(v); vc updated with sqrt(iX) on v and sqrt(-iZ) on
  /// each neighbor so the represented state is unchanged.
  void local_complement(int v);

  /// Measure vertex v in a Pauli basis with the given (or random) outcome and
  /// delete it. The effective axis is the physical axis commuted through
  /// vc_v; the standard graphical rules for Z / Y / X then apply, composing
  /// outcome-dependent byproducts onto the neighbors. `special_hint`
  /// overrides the X-rule neighbor choice (default: lowest live index).
  MeasurementOutcome measure(int v, Pauli axis, int forced,
                             SplitMix64* rng = nullptr, int special_hint = -1);

  /// Map live vertex -> axis of to_statevector(), in ascending vertex order.
  std::vector<int> live_axis_map() const;

  /// Dense realization (tensor vc)|G> over live vertices.
  StateVector to_statevector(int max_qubits = kDefaultMaxQubits) const;

 private:
  void bare_y_measure(int v, int outcome);
  void bare_z_measure(int v, int outcome);

  Graph g_;
  std::vector<SingleQubitClifford> vc_;
  std::vector<bool> alive_;
};

/// Stabilizers of the represented state: for each live vertex v, the graph
/// stabilizer X_v Z_N(v) conjugated by the vertex Cliffords, split into a
/// phase-free string and its classical sign fix. Throws when some vc lies
/// outside the Z-diagonal byproduct set {I, Z, sqrt(+-iZ)} (up to Pauli
/// factors), since then a fixed X/Y/Z setting cannot measure the result.
std::vector<std::pair<PauliString, int>> adjusted_stabilizers(const GraphWithLC& g);

}  // namespace mbvqe
