#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace qsa {

// 64-bit LCG (Knuth MMIX constants). Only the pseudo-random baselines use it.
class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Top 53 bits, so the result lies in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL,
                                  1442695040888963407ULL, 0ULL>
      engine_;
};

}  // namespace qsa
