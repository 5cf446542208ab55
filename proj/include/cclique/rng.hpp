#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace cclique {

// Deterministic 64-bit generator with explicit seeding. All sampling in the
// project flows through this wrapper: the mt19937_64 engine is fully
// specified by the standard, while std:: distributions are not, so raw
// engine words are converted to doubles/ranges by hand to keep runs
// bit-identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound), unbiased via rejection. bound > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = (std::numeric_limits<std::uint64_t>::max() / bound) * bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r < limit) return r % bound;
    }
  }

  // Standard exponential via inverse CDF; strictly positive.
  double next_exponential() {
    double u;
    do {
      u = next_double();
    } while (u <= 0.0);
    return -std::log(u);
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // splitmix64 finalizer, used to derive independent seed streams.
  static std::uint64_t split(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) { return split(a ^ split(b)); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cclique
