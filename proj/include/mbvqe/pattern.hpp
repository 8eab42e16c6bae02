#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mbvqe/graph.hpp"
#include "mbvqe/pauli.hpp"
#include "mbvqe/rng.hpp"
#include "mbvqe/statevector.hpp"

namespace mbvqe {

/// Graph with designated output vertices (the ansatz qubits). Patterns here
/// have no input qubits: every non-output vertex is measured.
struct OpenGraph {
  Graph g;
  std::vector<int> outputs;  // ordered; defines output qubit indices
  bool is_output(int v) const;
};

/// Measurement basis of one non-output vertex: an XY-plane angle, either a
/// variational parameter or a fixed value.
struct MeasureSpec {
  int param = -1;        // >= 0: index into the angle vector
  double fixed_angle = 0;  // used when param < 0
  bool is_parametric() const { return param >= 0; }
};

struct MeasurementPattern {
  OpenGraph og;
  std::map<int, MeasureSpec> measure;       // one spec per non-output vertex
  std::vector<std::vector<int>> layers;     // measured in order, layer by layer
  int num_params = 0;

  // Set by node_wise_pattern; empty otherwise.
  struct NodeWiseInfo {
    int n = 0;
    int l = 0;
    Graph ansatz{0};
  };
  std::optional<NodeWiseInfo> node_wise;

  int num_measured() const { return static_cast<int>(measure.size()); }
  std::vector<int> measurement_order() const;
};

/// Layered decoration: l stacked copies of the ansatz graph above the
/// ansatz qubits, vertical edges between consecutive copies, one parameter
/// per decoration vertex, measured farthest layer first. Vertex ids: copy k
/// occupies [k*n, (k+1)*n) with copy 0 the outputs.
MeasurementPattern node_wise_pattern(const Graph& ansatz, int layers);

/// Per-edge decoration: a pendant 2-path on each endpoint of every ansatz
/// edge (4 added qubits per edge), outer qubits measured before inner ones.
/// Breaks the flow condition whenever the ansatz has degree above one.
MeasurementPattern edge_wise_pattern(const Graph& ansatz);

/// 7-qubit ansatz for the periodic 4-qubit XY model: parent measured with
/// angle 0, mid-layer qubits with angles 1 and 2, four outputs. The mid
/// qubits are connected to each other; that wiring (and no output-local
/// Cliffords) is what reproduces the closed-form expectation.
MeasurementPattern tree_pattern();

/// Causal flow: successor function and measurement depth (larger depth is
/// measured earlier; outputs have depth 0).
struct FlowMap {
  std::map<int, int> f;
  std::map<int, int> depth;
};

/// Polynomial-time causal flow search (iterative elimination from the
/// outputs); nullopt when no causal flow exists.
std::optional<FlowMap> find_causal_flow(const OpenGraph& og);

/// Exhaustive backtracking search over successor functions, for small
/// instances; cross-checks find_causal_flow and certifies "none" verdicts.
std::optional<FlowMap> exhaustive_flow_search(const OpenGraph& og);

/// True iff f satisfies the three causal-flow axioms under its depth order.
bool flow_is_valid(const OpenGraph& og, const FlowMap& flow);

/// Correction targets derived from a flow: measuring v with outcome 1 flips
/// the angle sign on f(v) (X correction) and adds pi on N(f(v)) \ {v}
/// (Z corrections); corrections on outputs accumulate in the Pauli frame.
struct CorrectionSets {
  std::map<int, int> x_target;
  std::map<int, std::vector<int>> z_targets;
};
CorrectionSets corrections_from_flow(const OpenGraph& og, const FlowMap& flow);

/// Classical X^a Z^b record per output qubit; applied to observables.
struct PauliFrame {
  std::vector<std::uint8_t> x, z;
  bool is_identity() const;
};

/// Conjugate each term by the frame Paulis (sign flips only).
PauliSum apply_frame(const PauliSum& h, const PauliFrame& frame);
/// Apply the frame to a dense output state (testing and U3 paths).
void apply_frame_to_state(StateVector& s, const PauliFrame& frame);

enum class ExecMode { Forced, Adaptive, PostselectAllPlus };

struct ExecutionResult {
  StateVector state;                  // outputs in OpenGraph::outputs order
  PauliFrame frame;
  std::vector<std::uint8_t> outcomes; // in measurement order
  int attempts = 1;                   // postselection tries
  double branch_probability = 1;      // of the realized outcome vector
};

/// Run the pattern with the given angles.
///  - Forced: outcomes supplied per measured vertex (measurement order);
///    corrections applied when the pattern has a causal flow.
///  - Adaptive: outcomes drawn from the true branch probabilities, adaptive
///    angles per the correction sets (requires a flow).
///  - PostselectAllPlus: redraw until every outcome is 0; no corrections
///    needed; attempts capped at 10 * 2^k.
/// Qubits are entangled just in time and contracted at measurement, so the
/// active register stays near (ansatz size + 1) for layered patterns.
ExecutionResult execute(const MeasurementPattern& p, std::span<const double> angles,
                        ExecMode mode,
                        const std::vector<std::uint8_t>* forced = nullptr,
                        SplitMix64* rng = nullptr, int max_active = kDefaultMaxQubits);

/// Gate list for circuit-model comparison and export.
struct CircuitGate {
  enum class Kind { H, CZ, Phase } kind;
  int a = 0, b = -1;   // qubits
  double theta = 0;    // Phase only
};

/// The circuit a node-wise pattern implements deterministically: starting
/// from |+>^n, a CZ layer per copy interleaved with per-qubit P(theta) H
/// from the farthest decoration layer inward.
std::vector<CircuitGate> equivalent_circuit(const MeasurementPattern& p,
                                            std::span<const double> angles);

/// Simulate a gate list from |+>^n.
StateVector simulate_circuit(const std::vector<CircuitGate>& gates, int n,
                             int max_qubits = kDefaultMaxQubits);

}  // namespace mbvqe
