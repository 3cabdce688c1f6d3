// Copyright 2026 The wavernn Authors. Apache 2.0 License.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

namespace wavernn {

/// Deterministic xoshiro256++ stream seeded through splitmix64.
/// The same seed always yields the same stream, independent of platform
/// libraries; all distributions below are derived from raw 64-bit draws so
/// runs are reproducible bit-for-bit.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed) {
    uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  uint64_t seed() const { return seed_; }

  uint64_t next() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Independent child stream identified by `stream`; derived from the
  /// original seed only, so splitting is insensitive to how much of the
  /// parent stream has been consumed.
  Rng split(uint64_t stream) const {
    uint64_t x = seed_ ^ (0x9e3779b97f4a7c15ull + stream * 0xbf58476d1ce4e5b9ull);
    return Rng(splitmix64(x));
  }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (no state caching, two draws per value).
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Uniform integer in [0, n), rejection-free for n = 0 handled as error.
  uint64_t randint(uint64_t n) {
    // Lemire's multiply-shift with rejection for exact uniformity.
    uint64_t x = next();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<uint64_t>(m);
    if (lo < n) {
      const uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        x = next();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  /// Fisher-Yates permutation of {0, ..., n-1}.
  std::vector<int> permutation(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(randint(static_cast<uint64_t>(i) + 1));
      std::swap(p[i], p[j]);
    }
    return p;
  }

  template <typename M>
  void fill_uniform(M& m, double lo, double hi) {
    using S = typename M::Scalar;
    for (std::ptrdiff_t j = 0; j < m.cols(); ++j)
      for (std::ptrdiff_t i = 0; i < m.rows(); ++i)
        m(i, j) = static_cast<S>(uniform(lo, hi));
  }

  template <typename M>
  void fill_normal(M& m, double mean, double stddev) {
    using S = typename M::Scalar;
    for (std::ptrdiff_t j = 0; j < m.cols(); ++j)
      for (std::ptrdiff_t i = 0; i < m.rows(); ++i)
        m(i, j) = static_cast<S>(normal(mean, stddev));
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static uint64_t splitmix64(uint64_t& x) {
    uint64_t z = (x += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  uint64_t seed_;
  uint64_t state_[4];
};

}  // namespace wavernn
