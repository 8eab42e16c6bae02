#pragma once

#include <vector>

#include "mbvqe/heavy_hex.hpp"

namespace mbvqe {

/// Entangling-gate schedule with CNOT accounting. cnot_depth is the CNOT
/// count of the longest path through the circuit's dependency DAG.
struct PrepGate {
  enum class Kind { H, CZ, Swap } kind = Kind::CZ;
  int a = 0, b = -1;
  int layer = 0;
};

struct PrepCircuit {
  std::vector<PrepGate> gates;
  int num_qubits = 0;
  int cnot_count = 0;
  int cnot_depth = 0;
};

/// Graph-state preparation of the whole device: H everywhere, then the CZ
/// list scheduled by edge coloring (each CZ costs one CNOT). The synthetic
/// lattice uses a structural 4-coloring, so the depth is constant in the
/// grid size; other couplings fall back to greedy coloring.
PrepCircuit prep_circuit_mb(const HeavyHexLattice& device);

/// Gate-model baseline: the cluster CZs routed on the device coupling with
/// shortest-path SWAP chains (3 CNOTs each) from a fixed initial layout on
/// the lattice's cluster vertices, scheduled greedily in edge order.
PrepCircuit prep_circuit_naive(const HeavyHexLattice& device);

/// CNOT-weighted longest path: CZ = 1, Swap = 3, H = 0.
int cnot_depth_of(const std::vector<PrepGate>& gates, int num_qubits);

}  // namespace mbvqe
