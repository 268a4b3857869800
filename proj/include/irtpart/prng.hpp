#ifndef IRTPART_PRNG_HPP
#define IRTPART_PRNG_HPP

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace irtpart {

/// One output step of splitmix64; advances `state`.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Labeled-stream seed derivation: the seed of stream `label` under root seed
/// `root` is the second splitmix64 output of state (root XOR fnv1a64(label)).
/// Every stochastic operation in the library draws from a stream named this
/// way, so reruns with the same root seed are byte-identical.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view label) {
  std::uint64_t state = root ^ fnv1a64(label);
  splitmix64_next(state);
  return splitmix64_next(state);
}

/// xoshiro256** seeded via splitmix64. All distributions are implemented
/// locally (never std::uniform_*_distribution) so sequences are identical
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64_next(sm);
  }

  /// Child stream, derived from this rng's seed without consuming state.
  Rng stream(std::string_view label) const { return Rng(derive_seed(seed_, label)); }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0,1) with 53 random bits.
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// Unbiased integer in [0, n). Lemire's multiply-then-reject.
  std::uint64_t next_below(std::uint64_t n) {
    __uint128_t m = (__uint128_t)next_u64() * n;
    auto lo = (std::uint64_t)m;
    if (lo < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        m = (__uint128_t)next_u64() * n;
        lo = (std::uint64_t)m;
      }
    }
    return (std::uint64_t)(m >> 64);
  }

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    return lo + (std::int64_t)next_below((std::uint64_t)(hi - lo) + 1);
  }

  double next_uniform(double lo, double hi) { return lo + next_double() * (hi - lo); }

  double next_log_uniform(double lo, double hi) {
    return std::exp(next_uniform(std::log(lo), std::log(hi)));
  }

  /// Standard normal, Marsaglia polar method.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  /// Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = (std::size_t)next_below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t seed_;
  std::uint64_t s_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace irtpart

#endif
