#pragma once

#include <cmath>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "bmac/types.hpp"

namespace test {

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline double uni(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline bmac::Channel random_channel(std::mt19937_64& rng, double lo = 0.02, double hi = 0.98) {
  return bmac::Channel(uni(rng, lo, hi), uni(rng, lo, hi), uni(rng, lo, hi), uni(rng, lo, hi));
}

// Canonical three-parameter channel; case A iff a lands strictly between d and c.
inline bmac::Channel random_3param(std::mt19937_64& rng, bool case_a) {
  while (true) {
    const double d = uni(rng, 0.05, 0.8);
    const double c = uni(rng, d + 0.1, 0.95);
    double a = 0.0;
    if (case_a) {
      a = d + uni(rng, 0.1, 0.9) * (c - d);
    } else if (d > 0.1 && (rng() & 1u)) {
      a = uni(rng, 0.02, d - 0.03);
    } else if (c < 0.9) {
      a = uni(rng, c + 0.03, 0.98);
    } else {
      continue;
    }
    return bmac::Channel(a, a, c, d);
  }
}

} // namespace test
