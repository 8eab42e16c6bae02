#include <doctest.h>

#include <random>

#include "mbvqe/pauli.hpp"
#include "oracle.hpp"

using namespace mbvqe;

TEST_CASE("single-site products carry exact phases") {
  // XZ = -iY
  PauliString a = PauliString::parse("XI");
  PauliString b = PauliString::parse("ZI");
  CHECK(multiply(a, b).str() == "-iYI");
  // ZX = +iY: order matters
  CHECK(multiply(b, a).str() == "+iYI");
  // identity absorbs
  PauliString any = PauliString::parse("-iXYZI");
  CHECK(multiply(any, PauliString(4)) == any);
  CHECK(multiply(PauliString(4), any) == any);
}

TEST_CASE("Z times a two-vertex graph stabilizer") {
  // Z_1 * (X_1 Z_2); the dense oracle fixes the sign.
  PauliString z1 = PauliString::single(2, 0, Pauli::Z);
  PauliString stab = PauliString::parse("XZ");
  PauliString prod = multiply(z1, stab);
  Eigen::MatrixXcd expect = oracle::matrix_of(z1) * oracle::matrix_of(stab);
  CHECK((oracle::matrix_of(prod) - expect).norm() == doctest::Approx(0.0));
  CHECK(prod.str() == "+iYZ");
}

TEST_CASE("phase composition matches dense matrices on random strings") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 1 + static_cast<int>(gen() % 6);
    PauliString a = oracle::random_string(n, gen);
    PauliString b = oracle::random_string(n, gen);
    Eigen::MatrixXcd lhs = oracle::matrix_of(multiply(a, b));
    Eigen::MatrixXcd rhs = oracle::matrix_of(a) * oracle::matrix_of(b);
    CHECK((lhs - rhs).norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("associativity on random triples") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + static_cast<int>(gen() % 5);
    PauliString a = oracle::random_string(n, gen);
    PauliString b = oracle::random_string(n, gen);
    PauliString c = oracle::random_string(n, gen);
    CHECK(multiply(a, multiply(b, c)) == multiply(multiply(a, b), c));
  }
}

TEST_CASE("commutes agrees with the matrix commutator, exhaustively at n=2") {
  for (int i = 0; i < 16; ++i) {
    PauliString a(2);
    a.set_letter(0, static_cast<Pauli>(i % 4));
    a.set_letter(1, static_cast<Pauli>(i / 4));
    for (int j = 0; j < 16; ++j) {
      PauliString b(2);
      b.set_letter(0, static_cast<Pauli>(j % 4));
      b.set_letter(1, static_cast<Pauli>(j / 4));
      Eigen::MatrixXcd ma = oracle::matrix_of(a), mb = oracle::matrix_of(b);
      bool comm = (ma * mb - mb * ma).norm() < 1e-12;
      CHECK(commutes(a, b) == comm);
    }
  }
  CHECK(commutes(PauliString::parse("XX"), PauliString::parse("ZZ")));
  CHECK_FALSE(commutes(PauliString::parse("XI"), PauliString::parse("ZI")));
}

TEST_CASE("mismatched qubit counts are rejected") {
  CHECK_THROWS_AS(multiply(PauliString(2), PauliString(3)), std::invalid_argument);
  CHECK_THROWS_AS(commutes(PauliString(2), PauliString(3)), std::invalid_argument);
}

TEST_CASE("PauliSum folds phases and rejects non-Hermitian input") {
  PauliSum h(2);
  PauliString s = PauliString::parse("-XZ");
  h.add(2.0, s);  // coefficient 2 * (-1) folds to -2
  CHECK(h.num_terms() == 1);
  CHECK(h.terms()[0].first == doctest::Approx(-2.0));
  CHECK(h.terms()[0].second.phase_power() == 0);

  PauliString si = PauliString::parse("iXZ");
  h.add(std::complex<double>(0, -3.0), si);  // (-3i)(i) = 3, merges
  CHECK(h.num_terms() == 1);
  CHECK(h.terms()[0].first == doctest::Approx(1.0));

  CHECK_THROWS_AS(h.add(1.0, si), std::invalid_argument);
}

TEST_CASE("rendering round-trips") {
  CHECK(PauliString::parse("+XZIY").str() == "+XZIY");
  CHECK(PauliString::parse("-iZZ").str() == "-iZZ");
  CHECK(PauliString(3).str() == "+III");
}

TEST_CASE("qubitwise grouping covers all terms with compatible settings") {
  PauliSum h(3);
  h.add(1.0, PauliString::parse("XXI"));
  h.add(0.5, PauliString::parse("IXX"));
  h.add(-1.0, PauliString::parse("ZIZ"));
  h.add(0.25, PauliString::parse("IIZ"));
  auto groups = group_qubitwise(h);
  int covered = 0;
  for (const auto& g : groups) {
    for (int idx : g.term_indices) {
      ++covered;
      const PauliString& t = h.terms()[static_cast<std::size_t>(idx)].second;
      for (int q = 0; q < 3; ++q)
        if (t.letter(q) != Pauli::I) CHECK(g.basis[static_cast<std::size_t>(q)] == t.letter(q));
    }
  }
  CHECK(covered == h.num_terms());
  CHECK(groups.size() == 2);  // {XXI, IXX} and {ZIZ, IIZ}
}
