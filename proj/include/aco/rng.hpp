#pragma once

#include <cstdint>
#include <cmath>

namespace aco {

// Deterministic 64-bit generator (splitmix64). Used instead of the standard
// library distributions so that generated graphs and partitions are
// bit-identical across platforms and standard library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Lemire's multiply-shift with rejection.
  std::uint64_t uniform_below(std::uint64_t n) {
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t t = -n % n;
      while (lo < t) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Poisson by CDF inversion; adequate for the small means used here.
  std::uint64_t poisson(double mean) {
    double u = uniform01();
    double p = std::exp(-mean);
    double cum = p;
    std::uint64_t k = 0;
    while (u > cum && k < 1000) {
      ++k;
      p *= mean / static_cast<double>(k);
      cum += p;
    }
    return k;
  }

  // Poisson conditioned on k >= 1.
  std::uint64_t poisson_ge1(double mean) {
    for (;;) {
      std::uint64_t k = poisson(mean);
      if (k >= 1) return k;
    }
  }

 private:
  std::uint64_t state_;
};

// Stateless mix for hash-style placement (random vertex cut).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace aco
