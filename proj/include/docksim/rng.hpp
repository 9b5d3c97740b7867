#pragma once

#include <cmath>
#include <cstdint>

namespace docksim {

// Counter-free splitmix64 stream. Used instead of <random> engines so that
// sweep runs keyed by (seed, run index) produce identical bytes regardless
// of execution order, thread count, or standard-library version.
class Prng {
 public:
  explicit Prng(uint64_t seed) : state_(seed) {}

  static uint64_t mix(uint64_t seed, uint64_t stream) {
    // One splitmix64 step over the xor of the two keys.
    uint64_t z = seed ^ (stream * 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; uncached so the stream position is a
  // pure function of the number of calls.
  double gaussian() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  uint64_t state_;
};

} // namespace docksim
