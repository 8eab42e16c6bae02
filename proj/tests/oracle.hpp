#pragma once

// Test-only dense oracles, built independently of the library's mask-based
// paths: plain 2x2 matrices composed with Kronecker products, and projector
// algebra done as explicit matrix products.

#include <Eigen/Dense>
#include <complex>
#include <random>

#include "mbvqe/pauli.hpp"

namespace oracle {

using cd = std::complex<double>;

inline Eigen::Matrix2cd mat1(mbvqe::Pauli p) {
  Eigen::Matrix2cd m;
  switch (p) {
    case mbvqe::Pauli::I: m << 1, 0, 0, 1; break;
    case mbvqe::Pauli::X: m << 0, 1, 1, 0; break;
    case mbvqe::Pauli::Y: m << 0, cd(0, -1), cd(0, 1), 0; break;
    case mbvqe::Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

// Kronecker product with qubit 0 as the least significant index, matching
// the library's little-endian amplitude layout: op(q) = I (x) ... (x) M_q
// (x) ... (x) I with M at position q from the right.
inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& high, const Eigen::MatrixXcd& low) {
  Eigen::MatrixXcd out(high.rows() * low.rows(), high.cols() * low.cols());
  for (int i = 0; i < high.rows(); ++i)
    for (int j = 0; j < high.cols(); ++j)
      out.block(i * low.rows(), j * low.cols(), low.rows(), low.cols()) = high(i, j) * low;
  return out;
}

inline Eigen::MatrixXcd matrix_of(const mbvqe::PauliString& s) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = 0; q < s.num_qubits(); ++q) m = kron(mat1(s.letter(q)), m);
  return s.phase() * m;
}

inline Eigen::MatrixXcd matrix_of(const mbvqe::PauliSum& h) {
  const long dim = 1L << h.num_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [c, t] : h.terms()) m += c * matrix_of(t);
  return m;
}

// Single-qubit operator embedded at site q of an n-qubit register.
inline Eigen::MatrixXcd embed(const Eigen::Matrix2cd& u, int q, int n) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (int k = 0; k < n; ++k)
    m = kron(k == q ? Eigen::MatrixXcd(u) : Eigen::MatrixXcd(Eigen::Matrix2cd::Identity()), m);
  return m;
}

// Projector |theta_b><theta_b| at site q: |theta_+-> = (|0> +- e^{i t}|1>)/sqrt(2).
inline Eigen::MatrixXcd xy_projector(double theta, int bit, int q, int n) {
  Eigen::Vector2cd v;
  v << 1.0, (bit == 0 ? 1.0 : -1.0) * std::exp(cd(0, theta));
  v /= std::sqrt(2.0);
  Eigen::Matrix2cd p = v * v.adjoint();
  return embed(p, q, n);
}

inline mbvqe::PauliString random_string(int n, std::mt19937_64& gen, bool random_phase = true) {
  std::uniform_int_distribution<int> letter(0, 3);
  mbvqe::PauliString s(n);
  for (int q = 0; q < n; ++q) s.set_letter(q, static_cast<mbvqe::Pauli>(letter(gen)));
  if (random_phase) s.set_phase_power(letter(gen));
  return s;
}

}  // namespace oracle
