#pragma once

#include "mbvqe/pauli.hpp"

namespace mbvqe {

/// Lattice Schwinger Hamiltonian couplings (staggered fermions after the
/// Jordan-Wigner transformation). Sites are 1-based in the formulas below
/// and 0-based in the returned operator.
struct SchwingerParams {
  int sites = 4;   // S >= 2, equals the qubit count
  double j = 1.0;
  double w = 1.0;
  double mu = 4.0;
};

/// H = (J/2) sum_{n=1}^{S-2} sum_{k=n+1}^{S-1} (S-k) Z_n Z_k
///   + (w/2) sum_{n=1}^{S-1} (X_n X_{n+1} + Y_n Y_{n+1})
///   + (mu/2) sum_{n=1}^{S} (-1)^n Z_n
///   - (J/2) sum_{n=1}^{S-1} (n mod 2) sum_{k=1}^{n} Z_k
/// The long-range sum's inner bound is read as k = n+1 (the standard
/// Kogut-Susskind form); run metadata records this reading.
PauliSum schwinger(const SchwingerParams& p);

/// A human-readable note on the long-range bound convention, embedded in
/// experiment output metadata.
const char* schwinger_bound_note();

enum class PerturbSites { FirstTwo, All };

struct XYParams {
  int sites = 4;      // n >= 2
  double g = 1.0;     // anisotropy
  double d = 0.0;     // Z-perturbation strength
  PerturbSites perturb = PerturbSites::FirstTwo;
};

/// Open chain sum_{i=1}^{n-1} [(1+g)/2 X_i X_{i+1} + (1-g)/2 Y_i Y_{i+1}]
/// plus d*Z_i over the perturbed sites (the first two by default; a flag
/// extends it to all sites).
PauliSum xy_chain(const XYParams& p);

struct PeriodicXY {
  PauliSum hxy;  // -(1+g)/2 Hx + (1-g)/2 Hy
  PauliSum hx;   // X1X2 + X2X3 + X3X4 + X4X1
  PauliSum hy;   // Y1Y2 + Y2Y3 + Y3Y4 + Y4Y1
};

/// Periodic 4-qubit XY model split into its two measurement settings.
PeriodicXY xy_periodic4(double g);

/// Closed-form tree-ansatz expectation of the periodic 4-qubit XY model:
/// -(1+g)(1+cos t1) - (1-g)/2 * sin t1 (sin t2 + sin t3).
double tree_expectation_analytic(double theta1, double theta2, double theta3, double g);

}  // namespace mbvqe
