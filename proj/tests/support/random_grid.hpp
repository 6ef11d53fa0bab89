#pragma once

// Seeded generators for property tests. Uniform draws are formed from the
// raw 64-bit engine output so sequences do not depend on the standard
// library's distribution implementations.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace testing_support {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  /// Log-uniform on [lo, hi], lo > 0.
  double log_uniform(double lo, double hi);

 private:
  std::mt19937_64 engine_;
};

inline double Rng::log_uniform(double lo, double hi) {
  const double a = std::log(lo);
  const double b = std::log(hi);
  return std::exp(uniform(a, b));
}

}  // namespace testing_support
