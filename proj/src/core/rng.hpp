#pragma once

#include <cstdint>
#include <vector>

namespace ng {

// Deterministic PRNG with a fixed algorithm so results are reproducible
// across platforms and standard library versions (std:: distributions are
// implementation defined). SplitMix64 seeds an xoshiro256** state; streams
// are derived by hashing (seed, stream ids) so parallel work can pull
// independent, schedule-free streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  static Rng derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                    std::uint64_t c = 0) {
    std::uint64_t x = seed;
    x = splitmix64(x) ^ (a + 0x9e3779b97f4a7c15ULL);
    x = splitmix64(x) ^ (b + 0xbf58476d1ce4e5b9ULL);
    x = splitmix64(x) ^ (c + 0x94d049bb133111ebULL);
    return Rng(splitmix64(x));
  }

  std::uint64_t next() {
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

  // Uniform in [0, bound) without modulo bias (rejection sampling).
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) return 0;
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform double in [0, 1).
  double next_double() { return (next() >> 11) * 0x1.0p-53; }

  // Uniform double in [lo, hi).
  double next_double(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct indices drawn from [0, n), in random order.
  std::vector<std::uint32_t> sample_without_replacement(std::uint64_t n,
                                                        std::uint64_t k) {
    std::vector<std::uint32_t> idx(n);
    for (std::uint64_t i = 0; i < n; ++i) idx[i] = static_cast<std::uint32_t>(i);
    if (k > n) k = n;
    for (std::uint64_t i = 0; i < k; ++i) {
      std::uint64_t j = i + next_below(n - i);
      std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
  }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace ng
