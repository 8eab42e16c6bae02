#include "mbvqe/clifford.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

namespace mbvqe {

namespace {

using cd = std::complex<double>;

Eigen::Matrix2cd pauli_matrix(Pauli p) {
  Eigen::Matrix2cd m;
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, cd(0, -1), cd(0, 1), 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

// Tableau key in [0, 24): 6 anticommuting (x,z) letter pairs x 4 signs.
int key_of(SignedPauli x, SignedPauli z) {
  int pair = (static_cast<int>(x.p) - 1) * 2;  // X:0, Y:2, Z:4
  // The two candidate z letters are the ones != x.p, in enum order.
  int hi = -1;
  for (int l = 1; l <= 3; ++l)
    if (l != static_cast<int>(x.p)) hi = l;
  pair += (static_cast<int>(z.p) == hi) ? 1 : 0;
  int sign = (x.sign < 0 ? 2 : 0) + (z.sign < 0 ? 1 : 0);
  return pair * 4 + sign;
}

struct CanonicalTable {
  std::array<Eigen::Matrix2cd, 24> matrix;
  std::array<SingleQubitClifford, 24> element;
  std::array<bool, 24> have{};
};

SignedPauli image_under_matrix(const Eigen::Matrix2cd& u, Pauli p) {
  Eigen::Matrix2cd m = u * pauli_matrix(p) * u.adjoint();
  for (int l = 1; l <= 3; ++l) {
    Eigen::Matrix2cd t = pauli_matrix(static_cast<Pauli>(l));
    if ((m - t).norm() < 1e-9) return {static_cast<Pauli>(l), 1};
    if ((m + t).norm() < 1e-9) return {static_cast<Pauli>(l), -1};
  }
  throw std::logic_error("conjugation image is not a signed Pauli");
}

Eigen::Matrix2cd phase_normalize(Eigen::Matrix2cd m) {
  for (int i = 0; i < 4; ++i) {
    cd e = m(i / 2, i % 2);
    if (std::abs(e) > 1e-9) {
      m *= std::conj(e) / std::abs(e);
      return m;
    }
  }
  return m;
}

// Generate all 24 elements as words in {H, S}, with phase-normalized
// canonical matrices. The tableau of each element is derived from its own
// matrix, so tableaux and matrices agree by construction.
const CanonicalTable& table() {
  static const CanonicalTable t = [] {
    CanonicalTable tab;
    Eigen::Matrix2cd h, s;
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    s << 1, 0, 0, cd(0, 1);
    std::vector<Eigen::Matrix2cd> frontier{phase_normalize(Eigen::Matrix2cd::Identity())};
    auto try_insert = [&tab, &frontier](const Eigen::Matrix2cd& m) {
      SignedPauli xi = image_under_matrix(m, Pauli::X);
      SignedPauli zi = image_under_matrix(m, Pauli::Z);
      int k = key_of(xi, zi);
      if (tab.have[static_cast<std::size_t>(k)]) return;
      tab.have[static_cast<std::size_t>(k)] = true;
      tab.matrix[static_cast<std::size_t>(k)] = phase_normalize(m);
      tab.element[static_cast<std::size_t>(k)] = SingleQubitClifford(xi, zi);
      frontier.push_back(phase_normalize(m));
    };
    try_insert(Eigen::Matrix2cd::Identity());
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      Eigen::Matrix2cd m = frontier[i];
      try_insert(h * m);
      try_insert(s * m);
    }
    for (bool b : tab.have)
      if (!b) throw std::logic_error("Clifford table incomplete");
    return tab;
  }();
  return t;
}

constexpr int kPhasePow[4][4] = {
    {0, 0, 0, 0},
    {0, 0, 1, 3},
    {0, 3, 0, 1},
    {0, 1, 3, 0},
};

}  // namespace

SingleQubitClifford::SingleQubitClifford(SignedPauli x_image, SignedPauli z_image)
    : x_(x_image), z_(z_image) {
  if (x_.p == Pauli::I || z_.p == Pauli::I || x_.p == z_.p)
    throw std::invalid_argument("tableau images must be distinct non-identity letters");
}

SingleQubitClifford SingleQubitClifford::identity() { return {}; }

SingleQubitClifford SingleQubitClifford::pauli(Pauli p) {
  switch (p) {
    case Pauli::I: return {};
    case Pauli::X: return {{Pauli::X, 1}, {Pauli::Z, -1}};
    case Pauli::Y: return {{Pauli::X, -1}, {Pauli::Z, -1}};
    case Pauli::Z: return {{Pauli::X, -1}, {Pauli::Z, 1}};
  }
  return {};
}

SingleQubitClifford SingleQubitClifford::hadamard() {
  return {{Pauli::Z, 1}, {Pauli::X, 1}};
}

SingleQubitClifford SingleQubitClifford::sqrt_z(int sign) {
  // exp(s i pi/4 Z): X -> -sY, Z -> Z
  return {{Pauli::Y, sign > 0 ? -1 : 1}, {Pauli::Z, 1}};
}

SingleQubitClifford SingleQubitClifford::sqrt_y(int sign) {
  // exp(s i pi/4 Y): X -> sZ, Z -> -sX
  return {{Pauli::Z, sign > 0 ? 1 : -1}, {Pauli::X, sign > 0 ? -1 : 1}};
}

SingleQubitClifford SingleQubitClifford::sqrt_x(int sign) {
  // exp(s i pi/4 X): X -> X, Z -> sY
  return {{Pauli::X, 1}, {Pauli::Y, sign > 0 ? 1 : -1}};
}

SignedPauli SingleQubitClifford::image(Pauli p) const {
  switch (p) {
    case Pauli::I: return {Pauli::I, 1};
    case Pauli::X: return x_;
    case Pauli::Z: return z_;
    case Pauli::Y: {
      // Y = iXZ, so image(Y) = i * image(X) * image(Z).
      int ia = static_cast<int>(x_.p), ib = static_cast<int>(z_.p);
      int pow = (1 + kPhasePow[ia][ib]) % 4;  // must be 0 or 2
      Pauli letter = static_cast<Pauli>(ia ^ ib);
      int sign = x_.sign * z_.sign * (pow == 2 ? -1 : 1);
      return {letter, sign};
    }
  }
  return {Pauli::I, 1};
}

SingleQubitClifford SingleQubitClifford::compose(const SingleQubitClifford& other) const {
  auto push = [this](SignedPauli sp) {
    SignedPauli out = image(sp.p);
    out.sign *= sp.sign;
    return out;
  };
  return {push(other.x_), push(other.z_)};
}

SingleQubitClifford SingleQubitClifford::inverse() const {
  // Tableau inversion: find where X and Z come from.
  SignedPauli xi, zi;
  for (int l = 1; l <= 3; ++l) {
    SignedPauli im = image(static_cast<Pauli>(l));
    if (im.p == Pauli::X) xi = {static_cast<Pauli>(l), im.sign};
    if (im.p == Pauli::Z) zi = {static_cast<Pauli>(l), im.sign};
  }
  return {xi, zi};
}

bool SingleQubitClifford::is_identity() const {
  return x_ == SignedPauli{Pauli::X, 1} && z_ == SignedPauli{Pauli::Z, 1};
}

int SingleQubitClifford::pauli_coset() const {
  // Letter permutation only (signs are the Pauli part).
  return index() / 4;
}

Eigen::Matrix2cd SingleQubitClifford::matrix() const {
  return table().matrix[static_cast<std::size_t>(index())];
}

int SingleQubitClifford::index() const { return key_of(x_, z_); }

std::string SingleQubitClifford::name() const {
  if (*this == identity()) return "I";
  if (*this == pauli(Pauli::X)) return "X";
  if (*this == pauli(Pauli::Y)) return "Y";
  if (*this == pauli(Pauli::Z)) return "Z";
  if (*this == hadamard()) return "H";
  if (*this == sqrt_z(1)) return "sqrt(iZ)";
  if (*this == sqrt_z(-1)) return "sqrt(-iZ)";
  if (*this == sqrt_y(1)) return "sqrt(iY)";
  if (*this == sqrt_y(-1)) return "sqrt(-iY)";
  if (*this == sqrt_x(1)) return "sqrt(iX)";
  if (*this == sqrt_x(-1)) return "sqrt(-iX)";
  return "C" + std::to_string(index());
}

PauliString conjugate(const SingleQubitClifford& c, const PauliString& p, int site) {
  if (site < 0 || site >= p.num_qubits()) throw std::out_of_range("site out of range");
  SignedPauli im = c.image(p.letter(site));
  PauliString out = p;
  out.set_letter(site, im.p);
  if (im.sign < 0) out.set_phase_power(out.phase_power() + 2);
  return out;
}

}  // namespace mbvqe
