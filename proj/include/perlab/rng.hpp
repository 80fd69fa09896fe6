#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace perlab {

// SplitMix64 finalizer. Good avalanche, cheap, and stateless: the basis of
// both the keyed (counter-based) generator used for percolation and the
// sequential streams used elsewhere.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ (mix64(b) + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2)));
}

// Keyed uniform in [0,1): depends only on (key, counter), so percolation of
// edge i is independent of evaluation order and thread count.
inline double keyed_u01(std::uint64_t key, std::uint64_t counter) {
  return static_cast<double>(mix64(key ^ mix64(counter)) >> 11) * 0x1.0p-53;
}

// Sequential stream built on the same mixer.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return mix64(state_ += 0x9e3779b97f4a7c15ull); }

  double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    // Rejection from the top to avoid modulo bias.
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t x = next_u64();
      if (x >= threshold) return x % bound;
    }
  }

  bool bernoulli(double p) { return u01() < p; }

  // Knuth's product method; fine for the small means used here.
  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 30.0) {
      double limit = std::exp(-mean);
      std::uint64_t k = 0;
      double prod = u01();
      while (prod > limit) {
        ++k;
        prod *= u01();
      }
      return k;
    }
    // Split large means to keep the product in range.
    return poisson(mean / 2) + poisson(mean / 2);
  }

  // Partial Fisher-Yates: uniformly chosen k-subset of items, in place; the
  // chosen elements end up in items[0..k).
  template <typename T>
  void choose_prefix(std::vector<T>& items, std::size_t k) {
    for (std::size_t i = 0; i < k && i + 1 < items.size(); ++i) {
      std::size_t j = i + static_cast<std::size_t>(below(items.size() - i));
      std::swap(items[i], items[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace perlab
