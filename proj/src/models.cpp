#include "mbvqe/models.hpp"

#include <cmath>
#include <stdexcept>

namespace mbvqe {

namespace {

PauliString zz(int n, int a, int b) {
  PauliString s(n);
  s.set_letter(a, Pauli::Z);
  s.set_letter(b, Pauli::Z);
  return s;
}

PauliString two(int n, int a, int b, Pauli p) {
  PauliString s(n);
  s.set_letter(a, p);
  s.set_letter(b, p);
  return s;
}

}  // namespace

PauliSum schwinger(const SchwingerParams& p) {
  if (p.sites < 2) throw std::invalid_argument("Schwinger model needs at least 2 sites");
  if (!std::isfinite(p.j) || !std::isfinite(p.w) || !std::isfinite(p.mu))
    throw std::invalid_argument("non-finite coupling");
  const int s = p.sites;
  PauliSum h(s);
  // Long-range ZZ (1-based n < k, weight S-k), 0-based storage.
  for (int n = 1; n <= s - 2; ++n)
    for (int k = n + 1; k <= s - 1; ++k)
      h.add(p.j / 2.0 * (s - k), zz(s, n - 1, k - 1));
  // Hopping: sigma+ sigma- + h.c. = (XX + YY)/2.
  for (int n = 1; n <= s - 1; ++n) {
    h.add(p.w / 2.0, two(s, n - 1, n, Pauli::X));
    h.add(p.w / 2.0, two(s, n - 1, n, Pauli::Y));
  }
  // Staggered mass.
  for (int n = 1; n <= s; ++n)
    h.add(p.mu / 2.0 * (n % 2 ? -1.0 : 1.0), PauliString::single(s, n - 1, Pauli::Z));
  // Linear background term.
  for (int n = 1; n <= s - 1; ++n) {
    if (n % 2 == 0) continue;
    for (int k = 1; k <= n; ++k)
      h.add(-p.j / 2.0, PauliString::single(s, k - 1, Pauli::Z));
  }
  return h;
}

const char* schwinger_bound_note() {
  return "long-range sum read as k=n+1..S-1 (standard Kogut-Susskind form); "
         "accuracy is measured against this Hamiltonian's own exact ground state";
}

PauliSum xy_chain(const XYParams& p) {
  if (p.sites < 2) throw std::invalid_argument("XY chain needs at least 2 sites");
  const int n = p.sites;
  PauliSum h(n);
  for (int i = 0; i + 1 < n; ++i) {
    h.add((1.0 + p.g) / 2.0, two(n, i, i + 1, Pauli::X));
    h.add((1.0 - p.g) / 2.0, two(n, i, i + 1, Pauli::Y));
  }
  const int last = p.perturb == PerturbSites::FirstTwo ? 2 : n;
  for (int i = 0; i < last; ++i)
    h.add(p.d, PauliString::single(n, i, Pauli::Z));
  return h;
}

PeriodicXY xy_periodic4(double g) {
  PauliSum hx(4), hy(4), hxy(4);
  for (int i = 0; i < 4; ++i) {
    int j = (i + 1) % 4;
    hx.add(1.0, two(4, i, j, Pauli::X));
    hy.add(1.0, two(4, i, j, Pauli::Y));
    hxy.add(-(1.0 + g) / 2.0, two(4, i, j, Pauli::X));
    hxy.add((1.0 - g) / 2.0, two(4, i, j, Pauli::Y));
  }
  return {hxy, hx, hy};
}

double tree_expectation_analytic(double t1, double t2, double t3, double g) {
  return -(1.0 + g) * (1.0 + std::cos(t1)) -
         (1.0 - g) / 2.0 * std::sin(t1) * (std::sin(t2) + std::sin(t3));
}

}  // namespace mbvqe
