#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <optional>
#include <utility>

#include "mbvqe/clifford.hpp"
#include "mbvqe/graph.hpp"
#include "mbvqe/pauli.hpp"
#include "mbvqe/rng.hpp"

namespace mbvqe {

inline constexpr int kDefaultMaxQubits = 14;       // pattern simulation window
inline constexpr int kMaxDiagonalizationQubits = 10;
inline constexpr double kZeroBranchTolerance = 1e-14;

/// Dense normalized amplitude vector. Qubit q is bit q of the index
/// (little-endian). Global phase is never normalized away; comparisons go
/// through overlap magnitudes only.
class StateVector {
 public:
  /// |0...0> on n qubits.
  explicit StateVector(int n, int max_qubits = kDefaultMaxQubits);
  static StateVector all_plus(int n, int max_qubits = kDefaultMaxQubits);

  int num_qubits() const { return n_; }
  int max_qubits() const { return max_; }
  Eigen::VectorXcd& amplitudes() { return amp_; }
  const Eigen::VectorXcd& amplitudes() const { return amp_; }
  double norm() const { return amp_.norm(); }

  /// Append one qubit in |+> as the new highest axis.
  void append_plus_qubit();
  /// Append one qubit in the given single-qubit state.
  void append_qubit(const Eigen::Vector2cd& state);

 private:
  int n_;
  int max_;
  Eigen::VectorXcd amp_;
};

/// prod_{(i,j) in E} CZ_ij |+>^V, with designated input vertices initialized
/// to given states instead of |+>.
StateVector prepare_graph_state(const Graph& g,
                                const std::map<int, Eigen::Vector2cd>& inputs = {},
                                int max_qubits = kDefaultMaxQubits);

void apply_cz(StateVector& s, int i, int j);
void apply_h(StateVector& s, int i);
/// Phase gate diag(1, e^{-i theta}); the convention under which projecting
/// qubit 1 of CZ_{12}(|psi>_1 |+>_2) onto |theta_+> leaves H P(theta)|psi>.
void apply_phase(StateVector& s, double theta, int i);
/// Euler rotation [[cos(z/2), -e^{i xi} sin(z/2)], [e^{i eta} sin(z/2),
/// e^{i(eta+xi)} cos(z/2)]].
void apply_u3(StateVector& s, double zeta, double eta, double xi, int i);
void apply_pauli(StateVector& s, Pauli p, int i);
void apply_single_qubit(StateVector& s, const Eigen::Matrix2cd& u, int i);
void apply_clifford(StateVector& s, const SingleQubitClifford& c, int i);
/// Multiply by the full signed string (phase included).
void apply_pauli_string(StateVector& s, const PauliString& p);

struct MeasurementOutcome {
  int qubit = 0;
  double angle = 0;     // XY-plane angle; X==0, Y==pi/2; NaN marks a Z measurement
  int bit = 0;          // 0 <=> projection on |theta_+> (or |0> for Z)
  double probability = 1;  // of the recorded branch at measurement time
};

inline constexpr int kRandomOutcome = -1;

/// Project qubit q onto |theta_{+-}> = (|0> +- e^{i theta}|1>)/sqrt(2),
/// renormalize, and contract the qubit out (higher axes shift down by one).
/// forced in {0,1} selects the branch; kRandomOutcome draws from the branch
/// probabilities using rng. A forced branch with probability below 1e-14
/// throws.
MeasurementOutcome measure_xy(StateVector& s, int q, double theta, int forced,
                              SplitMix64* rng = nullptr);

/// Pauli-basis measurement; X == theta 0, Y == theta pi/2 in the XY plane,
/// Z projects the computational basis (bit 0 <=> |0>).
MeasurementOutcome measure_pauli(StateVector& s, int q, Pauli axis, int forced,
                                 SplitMix64* rng = nullptr);

double expectation(const StateVector& s, const PauliSum& h);
/// <s|P|s> for one signed string.
std::complex<double> expectation(const StateVector& s, const PauliString& p);

Eigen::MatrixXcd to_dense_matrix(const PauliSum& h);

/// Smallest eigenvalue and a unit eigenvector (dense Hermitian solve, n <= 10).
std::pair<double, StateVector> ground_state_energy(const PauliSum& h);

double overlap_magnitude(const StateVector& a, const StateVector& b);
bool states_equal_up_to_global_phase(const StateVector& a, const StateVector& b,
                                     double tol);

/// Draw one basis index with probability |amp|^2.
int sample_basis_state(const StateVector& s, SplitMix64& rng);

}  // namespace mbvqe
