#pragma once

#include <cstdint>

namespace mbvqe {

/// Splittable counter-based PRNG (splitmix64). Every stochastic run derives
/// its own stream from a master seed so results are reproducible regardless
/// of scheduling.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [0, 2*pi).
  double next_angle() { return next_double() * 6.283185307179586476925286766559; }

  bool next_bit(double p_one = 0.5) { return next_double() < p_one; }

  /// Derive an independent child stream; stable under how much the parent
  /// has been consumed only when called on a fresh generator, so prefer
  /// derive_seed for job fan-out.
  SplitMix64 split(std::uint64_t stream) const;

 private:
  std::uint64_t state_;
};

/// Stateless child-seed derivation for work pools: mixes (master, stream)
/// through one splitmix64 round each.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  SplitMix64 g(master ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
  return g.next_u64();
}

inline SplitMix64 SplitMix64::split(std::uint64_t stream) const {
  return SplitMix64(derive_seed(state_, stream));
}

}  // namespace mbvqe
