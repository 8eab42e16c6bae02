#pragma once

#include <map>
#include <string>
#include <vector>

#include "mbvqe/graph.hpp"
#include "mbvqe/graph_state.hpp"

#include <json.hpp>

namespace mbvqe {

/// Degree-<=3 bipartite device hosting an rows x cols cluster grid. Cluster
/// vertices survive; every other qubit is consumed by one of three roles:
/// a path mid on the realization of one grid edge, half of a merge gadget
/// (an interior grid vertex split across two device qubits joined by a
/// link qubit), or a discard.
struct HeavyHexLattice {
  Graph coupling{0};
  int rows = 0, cols = 0;
  std::vector<int> cluster_vertex;  // grid row-major -> device vertex

  struct EdgePath {
    int grid_a = 0, grid_b = 0;    // grid indices (row-major)
    std::vector<int> mids;         // device vertices from the a side
  };
  std::vector<EdgePath> paths;     // one per grid edge

  struct MergePair {
    int survivor = 0;  // the cluster vertex
    int doomed = 0;    // absorbed half
    int link = 0;      // qubit between them
  };
  std::vector<MergePair> merges;

  std::vector<int> discards;

  int grid_index(int r, int c) const { return r * cols + c; }
  Graph target_grid() const { return Graph::grid(rows, cols); }

  /// Uniform synthetic lattice: every grid vertex is split into a
  /// top/link/bottom triple (the bottom half survives and hosts the down and
  /// right directions) and every grid edge gets one mid qubit, so each grid
  /// cell is bounded by a twelve-qubit honeycomb. Sizes: 5*R*C - R - C.
  static HeavyHexLattice make_abstract(int rows, int cols);

  /// One twelve-qubit honeycomb realizing a 2x2 grid by contraction only.
  static HeavyHexLattice single_honeycomb();

  /// Device description with an explicit grid mapping; paths are recovered
  /// as vertex-disjoint shortest paths and remaining qubits become
  /// discards. Grid vertices of degree 4 are not supported by the loader
  /// (they need explicit merge gadgets, as in make_abstract).
  static HeavyHexLattice from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// One measurement instruction: a physical Pauli basis and, for steps that
/// trigger the X rewriting rule, the designated special neighbor.
struct MeasureStep {
  int vertex = 0;
  Pauli basis = Pauli::Z;
  int special = -1;
};

struct HexClusterPlan {
  std::vector<MeasureStep> steps;       // execution order
  std::map<int, Pauli> bases;           // vertex -> physical basis
  std::vector<int> cluster_vertex;      // grid row-major -> device vertex
  Graph expected_grid{0};
};

/// Derive the measurement bases and processing order by a dry run on the
/// all-plus branch: merge gadgets first (effective X on the link with the
/// doomed half as special neighbor, then an effective Z removing the doomed
/// half), then discards, then edge paths (effective X cascade ending in an
/// effective Y). Basis choices depend only on byproduct cosets, which are
/// outcome independent, so the plan is valid on every branch.
HexClusterPlan hexcluster_pattern(const HeavyHexLattice& device);

struct HexRunResult {
  GraphWithLC state;
  std::vector<MeasurementOutcome> outcomes;
};

/// Execute the plan with forced outcomes (one bit per step) or rng draws.
HexRunResult run_plan(const HeavyHexLattice& device, const HexClusterPlan& plan,
                      const std::vector<std::uint8_t>* forced, SplitMix64* rng);

struct HexValidation {
  bool graph_matches = false;
  bool byproducts_confined = false;
  std::string detail;
};

/// Check that the survivors form exactly the target grid and that their
/// byproducts lie in {I, Z} (even grid degree) or {I, Z, sqrt(+-iZ)} (odd).
HexValidation validate_hex_run(const HeavyHexLattice& device, const HexClusterPlan& plan,
                               const HexRunResult& run);

}  // namespace mbvqe
