#include "mbvqe/statevector.hpp"

#include <cmath>
#include <stdexcept>

namespace mbvqe {

namespace {
using cd = std::complex<double>;
constexpr double kInvSqrt2 = 0.70710678118654752440;
}  // namespace

StateVector::StateVector(int n, int max_qubits) : n_(n), max_(max_qubits) {
  if (n < 0) throw std::invalid_argument("negative qubit count");
  if (n > max_) throw std::invalid_argument("too many qubits");
  amp_ = Eigen::VectorXcd::Zero(1L << n);
  amp_(0) = 1.0;
}

StateVector StateVector::all_plus(int n, int max_qubits) {
  StateVector s(n, max_qubits);
  s.amp_.setConstant(std::pow(kInvSqrt2, n));
  return s;
}

void StateVector::append_plus_qubit() {
  append_qubit((Eigen::Vector2cd() << kInvSqrt2, kInvSqrt2).finished());
}

void StateVector::append_qubit(const Eigen::Vector2cd& state) {
  if (n_ + 1 > max_) throw std::invalid_argument("too many qubits");
  Eigen::VectorXcd next(amp_.size() * 2);
  next.head(amp_.size()) = state(0) * amp_;
  next.tail(amp_.size()) = state(1) * amp_;
  amp_ = std::move(next);
  ++n_;
}

StateVector prepare_graph_state(const Graph& g,
                                const std::map<int, Eigen::Vector2cd>& inputs,
                                int max_qubits) {
  StateVector s(0, max_qubits);
  for (int v = 0; v < g.num_vertices(); ++v) {
    auto it = inputs.find(v);
    if (it == inputs.end()) {
      s.append_plus_qubit();
    } else {
      if (std::abs(it->second.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("input state not normalized");
      s.append_qubit(it->second);
    }
  }
  for (auto [u, v] : g.edges()) apply_cz(s, u, v);
  return s;
}

void apply_cz(StateVector& s, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= s.num_qubits() || j >= s.num_qubits())
    throw std::out_of_range("qubit index out of range");
  const long bi = 1L << i, bj = 1L << j;
  auto& a = s.amplitudes();
  for (long k = 0; k < a.size(); ++k)
    if ((k & bi) && (k & bj)) a(k) = -a(k);
}

void apply_single_qubit(StateVector& s, const Eigen::Matrix2cd& u, int i) {
  if (i < 0 || i >= s.num_qubits()) throw std::out_of_range("qubit index out of range");
  const long bi = 1L << i;
  auto& a = s.amplitudes();
  for (long base = 0; base < a.size(); ++base) {
    if (base & bi) continue;
    const cd a0 = a(base), a1 = a(base | bi);
    a(base) = u(0, 0) * a0 + u(0, 1) * a1;
    a(base | bi) = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

void apply_h(StateVector& s, int i) {
  Eigen::Matrix2cd h;
  h << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
  apply_single_qubit(s, h, i);
}

void apply_phase(StateVector& s, double theta, int i) {
  if (i < 0 || i >= s.num_qubits()) throw std::out_of_range("qubit index out of range");
  const long bi = 1L << i;
  const cd ph = std::exp(cd(0, -theta));
  auto& a = s.amplitudes();
  for (long k = 0; k < a.size(); ++k)
    if (k & bi) a(k) *= ph;
}

void apply_u3(StateVector& s, double zeta, double eta, double xi, int i) {
  const double c = std::cos(zeta / 2), sn = std::sin(zeta / 2);
  Eigen::Matrix2cd u;
  u << c, -std::exp(cd(0, xi)) * sn, std::exp(cd(0, eta)) * sn,
      std::exp(cd(0, eta + xi)) * c;
  apply_single_qubit(s, u, i);
}

void apply_pauli(StateVector& s, Pauli p, int i) {
  if (p == Pauli::I) return;
  if (i < 0 || i >= s.num_qubits()) throw std::out_of_range("qubit index out of range");
  const long bi = 1L << i;
  auto& a = s.amplitudes();
  switch (p) {
    case Pauli::X:
      for (long k = 0; k < a.size(); ++k)
        if (!(k & bi)) std::swap(a(k), a(k | bi));
      break;
    case Pauli::Y:
      for (long k = 0; k < a.size(); ++k)
        if (!(k & bi)) {
          const cd a0 = a(k), a1 = a(k | bi);
          a(k) = cd(0, -1) * a1;
          a(k | bi) = cd(0, 1) * a0;
        }
      break;
    case Pauli::Z:
      for (long k = 0; k < a.size(); ++k)
        if (k & bi) a(k) = -a(k);
      break;
    default: break;
  }
}

void apply_clifford(StateVector& s, const SingleQubitClifford& c, int i) {
  apply_single_qubit(s, c.matrix(), i);
}

void apply_pauli_string(StateVector& s, const PauliString& p) {
  if (p.num_qubits() != s.num_qubits()) throw std::invalid_argument("size mismatch");
  for (int q = 0; q < p.num_qubits(); ++q) apply_pauli(s, p.letter(q), q);
  if (p.phase_power() != 0) s.amplitudes() *= p.phase();
}

MeasurementOutcome measure_xy(StateVector& s, int q, double theta, int forced,
                              SplitMix64* rng) {
  if (q < 0 || q >= s.num_qubits()) throw std::out_of_range("qubit index out of range");
  const long bq = 1L << q;
  const auto& a = s.amplitudes();
  const long half = a.size() / 2;
  // <theta_b| picks (a0 + (-1)^b e^{-i theta} a1)/sqrt(2).
  const cd e = std::exp(cd(0, -theta));
  Eigen::VectorXcd plus(half), minus(half);
  long j = 0;
  for (long k = 0; k < a.size(); ++k) {
    if (k & bq) continue;
    const cd a0 = a(k), a1 = a(k | bq);
    plus(j) = (a0 + e * a1) * kInvSqrt2;
    minus(j) = (a0 - e * a1) * kInvSqrt2;
    ++j;
  }
  const double p_plus = plus.squaredNorm();
  const double p_minus = minus.squaredNorm();
  int bit;
  if (forced == kRandomOutcome) {
    if (rng == nullptr) throw std::invalid_argument("random outcome requires rng");
    bit = rng->next_double() < p_plus ? 0 : 1;
  } else {
    bit = forced;
    const double p = bit == 0 ? p_plus : p_minus;
    if (p < kZeroBranchTolerance)
      throw std::runtime_error("forced measurement branch has zero probability");
  }
  Eigen::VectorXcd& kept = bit == 0 ? plus : minus;
  const double p = bit == 0 ? p_plus : p_minus;
  kept /= std::sqrt(p);
  StateVector next(s.num_qubits() - 1, s.max_qubits());
  next.amplitudes() = kept;
  s = std::move(next);
  return {q, theta, bit, p};
}

MeasurementOutcome measure_pauli(StateVector& s, int q, Pauli axis, int forced,
                                 SplitMix64* rng) {
  switch (axis) {
    case Pauli::X: return measure_xy(s, q, 0.0, forced, rng);
    case Pauli::Y: return measure_xy(s, q, 1.5707963267948966, forced, rng);
    case Pauli::Z: break;
    default: throw std::invalid_argument("measurement axis must be X, Y or Z");
  }
  if (q < 0 || q >= s.num_qubits()) throw std::out_of_range("qubit index out of range");
  const long bq = 1L << q;
  const auto& a = s.amplitudes();
  const long half = a.size() / 2;
  Eigen::VectorXcd zero(half), one(half);
  long j = 0;
  for (long k = 0; k < a.size(); ++k) {
    if (k & bq) continue;
    zero(j) = a(k);
    one(j) = a(k | bq);
    ++j;
  }
  const double p0 = zero.squaredNorm(), p1 = one.squaredNorm();
  int bit;
  if (forced == kRandomOutcome) {
    if (rng == nullptr) throw std::invalid_argument("random outcome requires rng");
    bit = rng->next_double() < p0 ? 0 : 1;
  } else {
    bit = forced;
    if ((bit == 0 ? p0 : p1) < kZeroBranchTolerance)
      throw std::runtime_error("forced measurement branch has zero probability");
  }
  Eigen::VectorXcd& kept = bit == 0 ? zero : one;
  const double p = bit == 0 ? p0 : p1;
  kept /= std::sqrt(p);
  StateVector next(s.num_qubits() - 1, s.max_qubits());
  next.amplitudes() = kept;
  s = std::move(next);
  return {q, std::nan(""), bit, p};
}

std::complex<double> expectation(const StateVector& s, const PauliString& p) {
  if (p.num_qubits() != s.num_qubits()) throw std::invalid_argument("size mismatch");
  long xmask = 0, zmask = 0;
  int ycount = 0;
  for (int q = 0; q < p.num_qubits(); ++q) {
    switch (p.letter(q)) {
      case Pauli::X: xmask |= 1L << q; break;
      case Pauli::Y: xmask |= 1L << q; zmask |= 1L << q; ++ycount; break;
      case Pauli::Z: zmask |= 1L << q; break;
      default: break;
    }
  }
  // P|k> = i^{-y}... track exactly: each Y contributes (i if bit set else -i)
  // via Y|0>=i|1>, Y|1>=-i|0>; Z contributes (-1)^bit; X flips.
  const auto& a = s.amplitudes();
  cd acc = 0;
  for (long k = 0; k < a.size(); ++k) {
    const long flipped = k ^ xmask;
    // sign from Z-part on the source index, i-factors from Y-part.
    int zpar = __builtin_popcountll(static_cast<unsigned long long>(k & zmask & ~xmask));
    // Y sites: factor i when source bit 0, -i when source bit 1.
    int ybits = __builtin_popcountll(static_cast<unsigned long long>(k & xmask & zmask));
    cd factor = (zpar % 2) ? -1.0 : 1.0;
    int ipow = (ycount - 2 * ybits) % 4;  // i^(plus) * (-i)^(set) = i^(ycount-2*ybits)
    ipow = ((ipow % 4) + 4) % 4;
    static const cd kI[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
    factor *= kI[ipow];
    acc += std::conj(a(flipped)) * factor * a(k);
  }
  return acc * p.phase();
}

double expectation(const StateVector& s, const PauliSum& h) {
  if (h.num_qubits() != s.num_qubits()) throw std::invalid_argument("size mismatch");
  double acc = 0;
  for (const auto& [c, t] : h.terms()) acc += c * expectation(s, t).real();
  return acc;
}

Eigen::MatrixXcd to_dense_matrix(const PauliSum& h) {
  const long dim = 1L << h.num_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [coeff, t] : h.terms()) {
    long xmask = 0, zmask = 0;
    for (int q = 0; q < t.num_qubits(); ++q) {
      switch (t.letter(q)) {
        case Pauli::X: xmask |= 1L << q; break;
        case Pauli::Y: xmask |= 1L << q; zmask |= 1L << q; break;
        case Pauli::Z: zmask |= 1L << q; break;
        default: break;
      }
    }
    for (long k = 0; k < dim; ++k) {
      const long row = k ^ xmask;
      int zpar = __builtin_popcountll(static_cast<unsigned long long>(k & zmask & ~xmask));
      int ysites = __builtin_popcountll(static_cast<unsigned long long>(xmask & zmask));
      int yset = __builtin_popcountll(static_cast<unsigned long long>(k & xmask & zmask));
      int ipow = ((ysites - 2 * yset) % 4 + 4) % 4;
      static const cd kI[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
      cd factor = ((zpar % 2) ? -1.0 : 1.0) * kI[ipow];
      m(row, k) += coeff * factor;
    }
  }
  return m;
}

std::pair<double, StateVector> ground_state_energy(const PauliSum& h) {
  if (h.num_qubits() > kMaxDiagonalizationQubits)
    throw std::invalid_argument("dense diagonalization limited to 10 qubits");
  Eigen::MatrixXcd m = to_dense_matrix(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  StateVector v(h.num_qubits(), std::max(kDefaultMaxQubits, h.num_qubits()));
  v.amplitudes() = es.eigenvectors().col(0);
  return {es.eigenvalues()(0), std::move(v)};
}

double overlap_magnitude(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits()) throw std::invalid_argument("size mismatch");
  return std::abs(a.amplitudes().dot(b.amplitudes()));
}

bool states_equal_up_to_global_phase(const StateVector& a, const StateVector& b,
                                     double tol) {
  return overlap_magnitude(a, b) >= 1.0 - tol;
}

int sample_basis_state(const StateVector& s, SplitMix64& rng) {
  const auto& a = s.amplitudes();
  double r = rng.next_double();
  double acc = 0;
  for (long k = 0; k < a.size(); ++k) {
    acc += std::norm(a(k));
    if (r < acc) return static_cast<int>(k);
  }
  return static_cast<int>(a.size() - 1);
}

}  // namespace mbvqe
