#pragma once

#include <cstdint>

namespace lev {

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based stream: output depends only on (seed, stream, counter), so
// replaying a run is bit-identical regardless of evaluation order elsewhere.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream)
      : state_(mix64(seed) ^ mix64(0xda942042e4dd58b5ULL * (stream + 1))) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    std::uint64_t i = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

 private:
  std::uint64_t state_;
};

// Well-known stream ids so substreams never collide across a run.
enum RngStream : std::uint64_t {
  kStreamQuery = 0,
  kStreamAction = 1,
  kStreamReservoir = 2,
  kStreamEnvironment = 3,
  kStreamSchedule = 4,
};

// Stateless evaluation used by environments: same (seed, t, i) always gives
// the same draw.
inline std::uint64_t hash3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix64(a ^ mix64(b ^ mix64(c ^ 0x2545f4914f6cdd1dULL)));
}

inline double uniform_at(std::uint64_t seed, std::uint64_t t, std::uint64_t i) {
  return static_cast<double>(hash3(seed, t, i) >> 11) * 0x1.0p-53;
}

}  // namespace lev
