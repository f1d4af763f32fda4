#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace dehealth {

// Seed mixer (splitmix64). Used to derive independent substream seeds so
// that results do not depend on how work is partitioned across threads.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (tag + 1));
  return splitmix64(s);
}

// xoshiro256** PRNG with hand-rolled samplers. <random> distributions are
// implementation-defined, so all sampling here is spelled out explicitly to
// keep byte-identical runs across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1).
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be > 0");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
  }

  // Standard normal via Box-Muller (no spare caching).
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Geometric on {1, 2, ...} with success probability p.
  std::uint64_t geometric(double p) {
    if (p <= 0.0 || p > 1.0) throw std::invalid_argument("geometric: bad p");
    if (p == 1.0) return 1;
    double u = uniform01();
    while (u <= 0.0) u = uniform01();
    const double k = std::floor(std::log(u) / std::log1p(-p));
    return 1 + static_cast<std::uint64_t>(k);
  }

  // Gamma(shape, 1) via Marsaglia-Tsang.
  double gamma(double shape) {
    if (shape <= 0.0) throw std::invalid_argument("gamma: shape must be > 0");
    if (shape < 1.0) {
      const double u = uniform01();
      return gamma(shape + 1.0) * std::pow(u > 0 ? u : 1e-300, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = uniform01();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (u > 0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
        return d * v;
    }
  }

  // Dirichlet via normalized gamma draws.
  std::vector<double> dirichlet(std::size_t dim, double alpha) {
    std::vector<double> w(dim);
    double total = 0.0;
    for (auto& x : w) {
      x = gamma(alpha);
      total += x;
    }
    if (total <= 0.0) total = 1.0;
    for (auto& x : w) x /= total;
    return w;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_index(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  Rng derive(std::uint64_t tag) const { return Rng(mix_seed(state_[0], tag)); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace dehealth
