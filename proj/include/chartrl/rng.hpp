#pragma once

#include <cstdint>

namespace chartrl {

/// Deterministic 64-bit generator (splitmix64). Produces the same stream for
/// a given seed on every platform, unlike std:: distributions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Returns 0 for n == 0.
  uint64_t below(uint64_t n) {
    if (n == 0) return 0;
    return static_cast<uint64_t>((static_cast<__uint128_t>(next_u64()) * n) >> 64);
  }

  /// Uniform integer in [lo, hi], inclusive.
  int range_int(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo) + 1));
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

 private:
  uint64_t state_;
};

/// Hash-combines two seeds into a new stream seed.
inline uint64_t mix_seed(uint64_t a, uint64_t b) {
  Rng r(a);
  Rng r2(r.next_u64() ^ b);
  return r2.next_u64();
}

inline uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c) {
  return mix_seed(mix_seed(a, b), c);
}

}  // namespace chartrl
