// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace swarmft {

inline uint64_t splitmix64_next(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Deterministic PRNG (xoshiro256++ seeded via splitmix64).
///
/// The distribution code is written out explicitly so that a seed produces
/// the same stream on every platform; standard-library distributions are
/// implementation-defined and would break byte-identical reruns.
class Rng {
public:
  explicit Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64_next(sm);
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n == 0 returns 0.
  uint64_t below(uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  /// Gaussian via Box-Muller; consumes exactly two uniforms per call.
  double gaussian(double mean, double sigma) {
    double u1 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;  // log(0) guard
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925286766559;
    return mean + sigma * r * std::cos(two_pi * u2);
  }

  /// Multiplicative jitter factor in [1 - pct, 1 + pct).
  double jitter(double pct) { return pct <= 0.0 ? 1.0 : uniform(1.0 - pct, 1.0 + pct); }

private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

/// Independent sub-stream seed for (base, stream) pairs.
inline uint64_t derive_seed(uint64_t base, uint64_t stream) {
  uint64_t st = base ^ (0x9e3779b97f4a7c15ull * (stream + 0x632be59bd9b4e019ull));
  return splitmix64_next(st);
}

}  // namespace swarmft
