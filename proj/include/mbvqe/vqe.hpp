#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mbvqe/lbfgs.hpp"
#include "mbvqe/models.hpp"
#include "mbvqe/pattern.hpp"

namespace mbvqe {

/// shots == 0 means exact expectation values.
struct EvalMode {
  long shots = 0;
  bool exact() const { return shots == 0; }
};

/// Global depolarizing factor applied at the expectation level:
/// <H>_noisy = (1-p) <H>_exact + p * tr(H)/2^n.
struct NoiseModel {
  double depolarizing = 0.0;
};

/// A variational objective: pattern energies of a Hamiltonian, optionally
/// with a U3(zeta, eta, xi) layer on every output qubit. Free parameters are
/// the unpinned pattern angles followed by the U3 triples (qubit-major).
struct ObjectiveSpec {
  MeasurementPattern pattern;
  PauliSum hamiltonian{0};
  bool u3_layer = false;
  EvalMode eval;
  ExecMode exec = ExecMode::Forced;  // Forced = all-plus branch
  NoiseModel noise;
  std::map<int, double> pinned;  // pattern param index -> fixed value

  int num_outputs() const { return static_cast<int>(pattern.og.outputs.size()); }
  int num_free_params() const;
  /// Split a free-parameter vector into full pattern angles and U3 angles.
  void expand(std::span<const double> free, std::vector<double>& pattern_angles,
              std::vector<double>& u3_angles) const;
};

struct EvalStats {
  double value = 0;
  double stderr_est = 0;       // sampling standard error (0 in exact mode)
  double acceptance_rate = 1;  // postselection survival fraction
  long shots_used = 0;
};

/// Expectation value of the spec's Hamiltonian at the given free parameters.
double evaluate(const ObjectiveSpec& spec, std::span<const double> theta,
                SplitMix64* rng = nullptr, EvalStats* stats = nullptr);

/// Single-observable estimate on the pattern output (used by experiments).
EvalStats estimate_observable(const ObjectiveSpec& spec, std::span<const double> theta,
                              const PauliSum& obs, SplitMix64* rng);

enum class GradKind { ParameterShift, FiniteDifference };

struct GradConfig {
  GradKind kind = GradKind::ParameterShift;
  double epsilon = 1e-6;  // finite differences
};

Eigen::VectorXd gradient(const ObjectiveSpec& spec, std::span<const double> theta,
                         const GradConfig& cfg = {}, SplitMix64* rng = nullptr);

struct OptimizerConfig {
  GradConfig grad;
  int restarts = 10;
  std::uint64_t seed = 1;
  int max_iterations = 400;
  double tolerance = 1e-10;
  int lbfgs_memory = 8;
};

struct RestartRecord {
  std::uint64_t seed = 0;
  double energy = 0;
  std::vector<double> trace;
  std::string status;
};

struct RunResult {
  double best_energy = 0;
  Eigen::VectorXd best_params;
  double exact_energy = 0;     // dense ground truth (when <= 10 qubits)
  double relative_error = 0;   // |E - Egs| / |Egs|, absolute when Egs ~ 0
  std::vector<RestartRecord> restarts;
  std::uint64_t seed = 0;
  double wall_seconds = 0;
};

/// Multi-restart quasi-Newton minimization of the spec's energy. Restarts
/// start from uniform [0, 2pi) angles under per-restart derived seeds;
/// individual restart failures are recorded, not fatal.
RunResult optimize(const ObjectiveSpec& spec, const OptimizerConfig& cfg);

double relative_error(double energy, double exact);

/// Clifford-data-regression linear model <H>_exact = a0 <H>_noisy + a1.
struct CdrModel {
  double a0 = 1;
  double a1 = 0;
  double mse = 0;  // mean squared residual of the fit points
};

/// Least-squares fit of (noisy, exact) pairs; needs >= 2 points with
/// nonzero spread in the noisy values.
CdrModel cdr_fit(const std::vector<std::pair<double, double>>& noisy_exact);
double cdr_apply(const CdrModel& m, double noisy);

/// ----- scan experiment (relative error vs size and depth) -----

struct ScanModel {
  enum class Family { Schwinger, XYChain } family = Family::Schwinger;
  SchwingerParams schwinger;
  XYParams xy;
  std::string label;
  PauliSum hamiltonian(int n) const;
};

struct ScanConfig {
  ScanModel model;
  std::vector<int> qubit_counts{4, 6};
  std::vector<int> layer_counts{1, 2, 3};
  bool u3 = true;
  int runs = 10;
  OptimizerConfig optimizer;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct ScanRun {
  int run = 0;
  std::uint64_t seed = 0;
  double energy = 0;
  double rel_error = 0;
};

struct ScanCell {
  std::string model;
  int n = 0;
  int layers = 0;
  bool u3 = true;
  double exact_energy = 0;
  std::vector<ScanRun> runs;
  double mean_rel_error = 0;
  double var_rel_error = 0;
  double median_rel_error = 0;
};

std::vector<ScanCell> scan_experiment(const ScanConfig& cfg);

/// ----- tree experiment (periodic XY scan with CDR) -----

struct TreeXYConfig {
  double g = 1.0;
  int points = 20;               // theta1 grid over [0, pi]
  EvalMode eval;                 // exact or shots per expectation value
  NoiseModel noise;
  std::vector<ExecMode> modes{ExecMode::Adaptive, ExecMode::PostselectAllPlus};
  std::uint64_t seed = 1;
};

struct TreeXYPoint {
  double theta1 = 0;
  double raw_hx = 0, raw_hy = 0;
  double mit_hx = 0, mit_hy = 0;
  double raw_hxy = 0, mit_hxy = 0;
  double exact_hx = 0, exact_hy = 0, exact_hxy = 0;
  double analytic_hxy = 0;
  double stderr_hx = 0, stderr_hy = 0;
  double acceptance = 1;
};

struct TreeXYModeReport {
  ExecMode mode;
  std::vector<TreeXYPoint> points;
  CdrModel fit_x, fit_y;
  double mse_x = 0, mse_y = 0;  // non-Clifford residuals against the fit
};

struct TreeXYReport {
  double g = 1;
  TreeXYConfig config;
  std::vector<TreeXYModeReport> modes;
};

TreeXYReport tree_xy_experiment(const TreeXYConfig& cfg);

const char* exec_mode_name(ExecMode m);

/// Run fn(0..jobs-1) on a small thread pool; results must be written to
/// per-index slots by the callback.
void parallel_for(int jobs, int threads, const std::function<void(int)>& fn);

}  // namespace mbvqe
