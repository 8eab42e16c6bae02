#include "mbvqe/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mbvqe {

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
  }
  throw std::invalid_argument(std::string("not a Pauli letter: ") + c);
}

PauliString::PauliString(int n) : letters_(static_cast<std::size_t>(n), Pauli::I) {
  if (n < 0) throw std::invalid_argument("negative qubit count");
}

PauliString PauliString::single(int n, int site, Pauli p) {
  PauliString s(n);
  if (site < 0 || site >= n) throw std::out_of_range("site out of range");
  s.letters_[site] = p;
  return s;
}

PauliString PauliString::parse(const std::string& text) {
  std::size_t i = 0;
  int pow = 0;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    if (text[i] == '-') pow = 2;
    ++i;
  }
  if (i < text.size() && text[i] == 'i') {
    pow += 1;
    ++i;
  }
  PauliString s(static_cast<int>(text.size() - i));
  for (int k = 0; i < text.size(); ++i, ++k) s.letters_[k] = pauli_from_char(text[i]);
  s.set_phase_power(pow);
  return s;
}

std::complex<double> PauliString::phase() const {
  switch (phase_pow_) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

bool PauliString::is_identity() const {
  return std::all_of(letters_.begin(), letters_.end(),
                     [](Pauli p) { return p == Pauli::I; });
}

std::string PauliString::str() const {
  static const char* prefix[4] = {"+", "+i", "-", "-i"};
  std::string out = prefix[phase_pow_];
  for (Pauli p : letters_) out += pauli_char(p);
  return out;
}

namespace {

// phase_table[a][b] = k such that a*b = i^k * (a xor-composed b), single site.
// XY = iZ, YZ = iX, ZX = iY; reversed order gives -i.
constexpr int kPhaseTable[4][4] = {
    {0, 0, 0, 0},  // I*
    {0, 0, 1, 3},  // X*: XX=I, XY=iZ, XZ=-iY
    {0, 3, 0, 1},  // Y*: YX=-iZ, YY=I, YZ=iX
    {0, 1, 3, 0},  // Z*: ZX=iY, ZY=-iX, ZZ=I
};

constexpr Pauli kLetterTable[4][4] = {
    {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z},
    {Pauli::X, Pauli::I, Pauli::Z, Pauli::Y},
    {Pauli::Y, Pauli::Z, Pauli::I, Pauli::X},
    {Pauli::Z, Pauli::Y, Pauli::X, Pauli::I},
};

}  // namespace

PauliString multiply(const PauliString& a, const PauliString& b) {
  if (a.num_qubits() != b.num_qubits())
    throw std::invalid_argument("PauliString size mismatch");
  PauliString out(a.num_qubits());
  int pow = a.phase_power() + b.phase_power();
  for (int q = 0; q < a.num_qubits(); ++q) {
    const int ia = static_cast<int>(a.letter(q));
    const int ib = static_cast<int>(b.letter(q));
    pow += kPhaseTable[ia][ib];
    out.set_letter(q, kLetterTable[ia][ib]);
  }
  out.set_phase_power(pow);
  return out;
}

bool commutes(const PauliString& a, const PauliString& b) {
  if (a.num_qubits() != b.num_qubits())
    throw std::invalid_argument("PauliString size mismatch");
  int anti = 0;
  for (int q = 0; q < a.num_qubits(); ++q) {
    Pauli pa = a.letter(q), pb = b.letter(q);
    if (pa != Pauli::I && pb != Pauli::I && pa != pb) ++anti;
  }
  return (anti % 2) == 0;
}

void PauliSum::add(double coeff, const PauliString& s) {
  add(std::complex<double>(coeff, 0), s);
}

void PauliSum::add(std::complex<double> coeff, const PauliString& s) {
  if (s.num_qubits() != n_) throw std::invalid_argument("PauliSum size mismatch");
  std::complex<double> folded = coeff * s.phase();
  if (std::abs(folded.imag()) > 1e-12)
    throw std::invalid_argument("non-Hermitian term: residual imaginary coefficient");
  if (!std::isfinite(folded.real()))
    throw std::invalid_argument("non-finite coefficient");
  PauliString bare = s;
  bare.set_phase_power(0);
  for (auto& [c, t] : terms_) {
    if (t.letters() == bare.letters()) {
      c += folded.real();
      return;
    }
  }
  terms_.emplace_back(folded.real(), bare);
}

double PauliSum::identity_coefficient() const {
  for (const auto& [c, t] : terms_)
    if (t.is_identity()) return c;
  return 0.0;
}

double PauliSum::one_norm() const {
  double s = 0;
  for (const auto& [c, t] : terms_) s += std::abs(c);
  return s;
}

std::string PauliSum::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) os << " ";
    os << (terms_[i].first >= 0 && i ? "+" : "") << terms_[i].first << "*"
       << terms_[i].second.str().substr(1);
  }
  return os.str();
}

namespace {

bool compatible_with(const std::vector<Pauli>& basis, const PauliString& s) {
  for (int q = 0; q < s.num_qubits(); ++q) {
    Pauli p = s.letter(q);
    if (p != Pauli::I && basis[q] != p) return false;
  }
  return true;
}

}  // namespace

std::vector<MeasurementSetting> group_qubitwise(const PauliSum& h) {
  std::vector<MeasurementSetting> groups;
  for (int i = 0; i < h.num_terms(); ++i) {
    const PauliString& s = h.terms()[i].second;
    bool placed = false;
    for (auto& g : groups) {
      bool ok = true;
      for (int q = 0; q < s.num_qubits() && ok; ++q) {
        Pauli p = s.letter(q);
        if (p != Pauli::I && g.basis[q] != Pauli::I && g.basis[q] != p) ok = false;
      }
      if (ok) {
        for (int q = 0; q < s.num_qubits(); ++q)
          if (s.letter(q) != Pauli::I) g.basis[q] = s.letter(q);
        g.term_indices.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) {
      MeasurementSetting g;
      g.basis.assign(s.num_qubits(), Pauli::I);
      for (int q = 0; q < s.num_qubits(); ++q) g.basis[q] = s.letter(q);
      g.term_indices.push_back(i);
      groups.push_back(std::move(g));
    }
  }
  return groups;
}

std::pair<MeasurementSetting, MeasurementSetting> group_two_settings(
    const std::vector<PauliString>& stabilizers, const std::vector<int>& anchor,
    const std::vector<int>& coloring) {
  if (stabilizers.size() != anchor.size())
    throw std::invalid_argument("stabilizer/anchor size mismatch");
  const int n = stabilizers.empty() ? 0 : stabilizers[0].num_qubits();
  MeasurementSetting a, b;
  a.basis.assign(n, Pauli::I);
  b.basis.assign(n, Pauli::I);
  // Anchored letters come from the stabilizers themselves (X, or Y after a
  // byproduct adjustment); opposite-color sites are measured in Z.
  for (std::size_t i = 0; i < stabilizers.size(); ++i) {
    const int v = anchor[i];
    if (v < 0 || v >= n) throw std::invalid_argument("anchor out of range");
    MeasurementSetting& mine = coloring[v] == 0 ? a : b;
    MeasurementSetting& other = coloring[v] == 0 ? b : a;
    Pauli head = stabilizers[i].letter(v);
    if (mine.basis[v] != Pauli::I && mine.basis[v] != head)
      throw std::invalid_argument("conflicting anchor letters in one setting");
    mine.basis[v] = head;
    if (other.basis[v] != Pauli::I && other.basis[v] != Pauli::Z)
      throw std::invalid_argument("coloring is not proper for these stabilizers");
    other.basis[v] = Pauli::Z;
  }
  for (std::size_t i = 0; i < stabilizers.size(); ++i) {
    MeasurementSetting& mine = coloring[anchor[i]] == 0 ? a : b;
    if (!compatible_with(mine.basis, stabilizers[i]))
      throw std::invalid_argument("stabilizer fits neither setting: " +
                                  stabilizers[i].str());
    mine.term_indices.push_back(static_cast<int>(i));
  }
  return {a, b};
}

}  // namespace mbvqe
