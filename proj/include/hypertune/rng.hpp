#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace hypertune {

/// Seeded generator with platform-independent derived draws. The standard
/// distributions are implementation-defined, so uniform reals and bounded
/// integers are derived from the raw 64-bit engine output here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform();

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform in [0, n). n must be positive.
  std::size_t below(std::size_t n);

  /// Random permutation of 0..n-1.
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace hypertune
