#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace mbvqe {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

/// Signed Pauli string with exact phase tracking. The phase is a power of i,
/// so products compose without any floating point.
class PauliString {
 public:
  /// Identity string on n qubits.
  explicit PauliString(int n);
  /// Single-letter string, identity elsewhere.
  static PauliString single(int n, int site, Pauli p);
  /// Parse e.g. "+XZIY", "-iZZ", "XX" (leading sign/i optional).
  static PauliString parse(const std::string& text);

  int num_qubits() const { return static_cast<int>(letters_.size()); }
  Pauli letter(int site) const { return letters_[site]; }
  void set_letter(int site, Pauli p) { letters_[site] = p; }
  /// Phase as a power of i, in {0,1,2,3}.
  int phase_power() const { return phase_pow_; }
  void set_phase_power(int k) { phase_pow_ = static_cast<std::uint8_t>(((k % 4) + 4) % 4); }
  std::complex<double> phase() const;
  const std::vector<Pauli>& letters() const { return letters_; }

  bool is_identity() const;
  std::string str() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::vector<Pauli> letters_;
  std::uint8_t phase_pow_ = 0;
};

/// Exact product a*b with composed phase.
PauliString multiply(const PauliString& a, const PauliString& b);

/// True iff ab == ba (anticommutation parity count).
bool commutes(const PauliString& a, const PauliString& b);

/// Hermitian observable: real-weighted sum of phase-free Pauli strings.
/// Phases of added strings are folded into the coefficients; a residual
/// imaginary part above 1e-12 is rejected.
class PauliSum {
 public:
  explicit PauliSum(int n) : n_(n) {}

  void add(double coeff, const PauliString& s);
  void add(std::complex<double> coeff, const PauliString& s);

  int num_qubits() const { return n_; }
  int num_terms() const { return static_cast<int>(terms_.size()); }
  const std::vector<std::pair<double, PauliString>>& terms() const { return terms_; }

  /// Coefficient of the identity string (0 if absent).
  double identity_coefficient() const;

  /// Sum of |coeff|; bounds the spectral radius.
  double one_norm() const;

  std::string str() const;

 private:
  int n_;
  std::vector<std::pair<double, PauliString>> terms_;
};

/// One global single-qubit measurement setting and the indices of the
/// strings it covers. A string is compatible when each of its non-identity
/// letters equals the setting letter at that site.
struct MeasurementSetting {
  std::vector<Pauli> basis;        // per qubit; I marks "unused"
  std::vector<int> term_indices;   // indices into the grouped collection
};

/// Greedy qubit-wise commuting grouping of an observable's terms.
std::vector<MeasurementSetting> group_qubitwise(const PauliSum& h);

/// Group graph-state stabilizers of a bipartite graph into exactly two
/// settings, one anchored on each color class. Each stabilizer must be
/// qubit-wise compatible with the setting of its anchor's color; throws if
/// the coloring is not proper for the strings or a stabilizer fits neither
/// setting. `anchor` gives the vertex each stabilizer belongs to.
std::pair<MeasurementSetting, MeasurementSetting> group_two_settings(
    const std::vector<PauliString>& stabilizers, const std::vector<int>& anchor,
    const std::vector<int>& coloring);

}  // namespace mbvqe
