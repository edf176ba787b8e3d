// Deterministic randomness. Two flavours:
//  - Rng: a sequential splitmix64 stream for test-instance generation;
//  - counter-based draws keyed on (seed, stream, draw) so that sampling is
//    reproducible for any partitioning of the work.
// No std:: distributions anywhere; outputs are bit-identical across builds.
#pragma once

#include <cmath>
#include <cstdint>

namespace wchaos {

// splitmix64 finalizer, usable as a stateless mixing function.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Maps 64 random bits into (0,1), bounded away from both endpoints.
inline double u01(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
}

inline std::uint64_t counter_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t draw) {
  return mix64(mix64(mix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL)) ^
               (draw * 0x8CB92BA72F3D8DD7ULL));
}

// k-th standard normal of the given stream via Box-Muller on counter draws.
inline double normal_at(std::uint64_t seed, std::uint64_t stream, int k) {
  const std::uint64_t j = static_cast<std::uint64_t>(k) / 2;
  const double u1 = u01(counter_key(seed, stream, 2 * j));
  const double u2 = u01(counter_key(seed, stream, 2 * j + 1));
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 6.283185307179586476925286766559 * u2;
  return (k % 2 == 0) ? rad * std::cos(ang) : rad * std::sin(ang);
}

struct Rng {
  std::uint64_t state = 0;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() { return u01(next()); }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // inclusive bounds; modulo bias is irrelevant at our range sizes
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

}  // namespace wchaos
