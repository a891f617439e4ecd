#pragma once

#include <cmath>
#include <cstdint>

namespace agnav {

/// splitmix64 step. Fast, full-period, and stable across platforms, which is
/// what replay determinism needs (libstdc++ distributions are not portable).
inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic stream id from a root seed and up to three tags
/// (robot id, purpose, sequence). Every consumer in the simulator gets its
/// own stream so subsystem order never perturbs another subsystem's draws.
inline uint64_t derive_stream(uint64_t seed, uint64_t a = 0, uint64_t b = 0,
                              uint64_t c = 0) {
  uint64_t s = seed;
  uint64_t h = splitmix64(s);
  s ^= a * 0x9e3779b97f4a7c15ULL + 0x100000001b3ULL;
  h ^= splitmix64(s);
  s ^= b * 0xc2b2ae3d27d4eb4fULL + 0x27d4eb2f165667c5ULL;
  h ^= splitmix64(s);
  s ^= c * 0x165667b19e3779f9ULL + 0x85ebca6b;
  h ^= splitmix64(s);
  return h;
}

class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : state_(seed) {}

  uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  int uniform_int(int n) {
    return static_cast<int>(next_u64() % static_cast<uint64_t>(n));
  }

  /// Box-Muller without spare caching: two draws per sample, so the
  /// consumed-stream length is a simple function of the call count.
  double gaussian(double mean = 0.0, double sigma = 1.0) {
    double u1 = uniform();
    const double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    const double mag = std::sqrt(-2.0 * std::log(u1));
    return mean + sigma * mag * std::cos(6.28318530717958647692 * u2);
  }

 private:
  uint64_t state_;
};

}  // namespace agnav
