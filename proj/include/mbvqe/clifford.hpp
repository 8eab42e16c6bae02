#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "mbvqe/pauli.hpp"

namespace mbvqe {

struct SignedPauli {
  Pauli p = Pauli::I;
  int sign = 1;  // +1 or -1
  friend bool operator==(const SignedPauli&, const SignedPauli&) = default;
};

/// Element of the 24-element single-qubit Clifford group, canonicalized by
/// its conjugation tableau (image of X, image of Z). Composition is tableau
/// chasing; a fixed 2x2 matrix representative is available for dense checks.
///
/// Square roots use the principal branch sqrt(s*i*P) := exp(s*i*pi/4*P), so
/// e.g. sqrt(iZ) maps X -> -Y and sqrt(-iZ) maps X -> +Y.
class SingleQubitClifford {
 public:
  /// Identity.
  SingleQubitClifford() = default;
  SingleQubitClifford(SignedPauli x_image, SignedPauli z_image);

  static SingleQubitClifford identity();
  static SingleQubitClifford pauli(Pauli p);
  static SingleQubitClifford hadamard();
  static SingleQubitClifford sqrt_z(int sign);  // sqrt(sign*iZ)
  static SingleQubitClifford sqrt_y(int sign);  // sqrt(sign*iY)
  static SingleQubitClifford sqrt_x(int sign);  // sqrt(sign*iX)

  SignedPauli x_image() const { return x_; }
  SignedPauli z_image() const { return z_; }
  /// Conjugation image of a letter: this * P * this^dagger (identity maps to
  /// identity; Y via Y = iXZ).
  SignedPauli image(Pauli p) const;

  /// this o other: apply `other` first. Matches matrix product
  /// matrix(this) * matrix(other) up to global phase.
  SingleQubitClifford compose(const SingleQubitClifford& other) const;
  SingleQubitClifford inverse() const;

  bool is_identity() const;
  /// True iff conjugation fixes Z, i.e. the element is diagonal in the
  /// computational basis up to phase: one of {I, Z, sqrt(iZ), sqrt(-iZ)}
  /// times a possible Z -- the byproduct class that stays measurable in a
  /// fixed X/Y setting.
  bool is_z_diagonal() const { return z_.p == Pauli::Z; }
  /// Coset of the Pauli subgroup (6 cosets); elements in the same coset
  /// differ by a Pauli factor only.
  int pauli_coset() const;

  /// Canonical unitary representative (fixed phase convention).
  Eigen::Matrix2cd matrix() const;

  /// Stable id in [0, 24).
  int index() const;
  std::string name() const;

  friend bool operator==(const SingleQubitClifford&, const SingleQubitClifford&) = default;

 private:
  SignedPauli x_{Pauli::X, 1};
  SignedPauli z_{Pauli::Z, 1};
};

/// c p c^dagger restricted to `site` of a multi-qubit string; the phase of p
/// is carried through and conjugation signs fold into the result's phase.
PauliString conjugate(const SingleQubitClifford& c, const PauliString& p, int site);

}  // namespace mbvqe
