#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "chanres/errors.hpp"
#include "chanres/special_functions.hpp"
#include "chanres/units.hpp"
#include "reference_values.hpp"
#include "support/random_grid.hpp"

using namespace chanres;

namespace {

// J_m(x) = (1/pi) int_0^pi cos(m t - x sin t) dt. The integrand extends to a
// smooth periodic function, so the trapezoid rule converges geometrically
// once the node count exceeds x + m by a margin.
double trapezoid_j(int m, double x) {
  const int nodes = static_cast<int>(x + m) + 64;
  const double h = kPi / nodes;
  double sum = 0.5 * (1.0 + std::cos(m * kPi));
  for (int i = 1; i < nodes; ++i) {
    const double t = i * h;
    sum += std::cos(m * t - x * std::sin(t));
  }
  return sum / nodes;
}

// Absolute comparison scale: the oscillation envelope, capped at 1, plus the
// trapezoid's own rounding floor.
double tolerance(double x) { return 1e-10 * std::min(1.0, std::sqrt(2.0 / (kPi * std::max(x, 1e-300)))) + 1e-13; }

}  // namespace

TEST_SUITE("special_functions") {
  TEST_CASE("J and Y against the high-precision table") {
    for (const auto& row : reference::kBesselJY) {
      // Relative to the oscillation envelope where the functions oscillate.
      const double env = row.x > row.m ? std::sqrt(2.0 / (kPi * row.x)) : 0.0;
      INFO("m = " << row.m << ", x = " << row.x);
      CHECK(std::abs(bessel_j(row.m, row.x) - row.j) <= 1e-10 * std::max(std::abs(row.j), env));
      CHECK(std::abs(bessel_y(row.m, row.x) - row.y) <= 1e-10 * std::max(std::abs(row.y), env));
    }
  }

  TEST_CASE("I and K against the high-precision table") {
    for (const auto& row : reference::kBesselIK) {
      INFO("m = " << row.m << ", x = " << row.x);
      CHECK(bessel_i(row.m, row.x) == doctest::Approx(row.i).epsilon(1e-10));
      CHECK(bessel_k(row.m, row.x) == doctest::Approx(row.k).epsilon(1e-10));
    }
  }

  TEST_CASE("zeros against the high-precision table") {
    for (const auto& row : reference::kBesselJZeros) {
      CHECK(std::abs(bessel_j_zero(row.m, row.k) - row.zero) <= 1e-10);
    }
  }

  TEST_CASE("documented values") {
    CHECK(bessel_j(0, 0.0) == 1.0);
    CHECK(bessel_j(1, 0.0) == 0.0);
    CHECK(std::abs(bessel_j(0, 2.404825557695773)) <= 1e-10);
    CHECK(bessel_k(0, 1.0) == doctest::Approx(reference::kK0At1).epsilon(1e-10));
    CHECK(bessel_i(0, 1.0) * bessel_k(1, 1.0) + bessel_i(1, 1.0) * bessel_k(0, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(bessel_k(0, 2.0) < bessel_k(0, 1.0));
    CHECK(bessel_j_zero(0, 1) == doctest::Approx(2.404825557695773).epsilon(1e-14));
    CHECK(bessel_j_zero(1, 1) == doctest::Approx(3.831705970207512).epsilon(1e-14));
    CHECK(bessel_j_zero(0, 1) < bessel_j_zero(1, 1));
    CHECK(bessel_j_zero(1, 1) < bessel_j_zero(0, 2));
  }

  TEST_CASE("domain errors") {
    CHECK_THROWS_AS(bessel_j(-1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_j(0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_j(0, 2e4), std::invalid_argument);
    CHECK_THROWS_AS(bessel_k(0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_k(0, -2.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_j_zero(21, 1), std::invalid_argument);
    CHECK_THROWS_AS(bessel_j_zero(0, 51), std::invalid_argument);
    CHECK_THROWS_AS(bessel_j_zero(0, 0), std::invalid_argument);
  }

  TEST_CASE("J agrees with an independent trapezoid evaluation on a random grid") {
    testing_support::Rng rng(21);
    for (int i = 0; i < 400; ++i) {
      const int m = rng.integer(0, 30);
      const double x = rng.uniform(0.0, 200.0);
      INFO("m = " << m << ", x = " << x);
      CHECK(std::abs(bessel_j(m, x) - trapezoid_j(m, x)) <= tolerance(x));
    }
  }

  TEST_CASE("three-term recurrence on a random grid") {
    testing_support::Rng rng(22);
    for (int i = 0; i < 1000; ++i) {
      const int m = rng.integer(1, 40);
      const double x = rng.uniform(1e-3, 1e4);
      const double jm = bessel_j(m, x);
      const double residual = bessel_j(m - 1, x) + bessel_j(m + 1, x) - 2.0 * m / x * jm;
      INFO("m = " << m << ", x = " << x);
      CHECK(std::abs(residual) <= 1e-9 * std::max(1.0, std::abs(jm)));
    }
  }

  TEST_CASE("cross-kind Wronskian on a random grid") {
    testing_support::Rng rng(23);
    for (int i = 0; i < 1000; ++i) {
      const int m = rng.integer(0, 30);
      const double x = rng.log_uniform(0.05, 1e4);
      if (m > 2.0 * x + 10.0) continue;  // Y_m overflows the comparison scale there
      const double w = bessel_j(m + 1, x) * bessel_y(m, x) - bessel_j(m, x) * bessel_y(m + 1, x);
      INFO("m = " << m << ", x = " << x);
      CHECK(w == doctest::Approx(2.0 / (kPi * x)).epsilon(1e-9));
    }
  }

  TEST_CASE("modified Wronskian on a random grid") {
    testing_support::Rng rng(24);
    for (int i = 0; i < 1000; ++i) {
      const int m = rng.integer(0, 30);
      const double x = rng.log_uniform(0.01, 600.0);
      // Scaled forms keep the products representable.
      const double w = bessel_i_scaled(m, x) * bessel_k_scaled(m + 1, x) +
                       bessel_i_scaled(m + 1, x) * bessel_k_scaled(m, x);
      INFO("m = " << m << ", x = " << x);
      CHECK(w == doctest::Approx(1.0 / x).epsilon(1e-9));
    }
  }

  TEST_CASE("derivative identities") {
    testing_support::Rng rng(25);
    for (int i = 0; i < 200; ++i) {
      const int m = rng.integer(0, 10);
      const double x = rng.uniform(0.1, 50.0);
      const double h = 1e-5 * x;
      const double fd = (bessel_j(m, x + h) - bessel_j(m, x - h)) / (2.0 * h);
      CHECK(bessel_j_prime(m, x) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
      const double fdk = (bessel_k(m, x + h) - bessel_k(m, x - h)) / (2.0 * h);
      CHECK(bessel_k_prime(m, x) == doctest::Approx(fdk).epsilon(1e-6));
    }
  }

  TEST_CASE("zero counting matches tabulated zeros") {
    for (const auto& row : reference::kBesselJZeros) {
      CHECK(bessel_j_zero_count(row.m, row.zero + 1e-9) == row.k);
      CHECK(bessel_j_zero_count(row.m, row.zero - 1e-9) == row.k - 1);
    }
  }

  TEST_CASE("root finder") {
    CHECK(find_root([](double x) { return x - 1.0; }, make_bracket([](double x) { return x - 1.0; }, 0.0, 2.0),
                    1e-14) == doctest::Approx(1.0).epsilon(1e-14));
    auto sq = [](double x) { return x * x - 2.0; };
    CHECK(std::abs(find_root(sq, make_bracket(sq, 1.0, 2.0), 1e-12) - std::sqrt(2.0)) <= 1e-8);
    auto j0 = [](double x) { return bessel_j(0, x); };
    CHECK(find_root(j0, make_bracket(j0, 2.0, 3.0), 1e-13) == doctest::Approx(2.4048255577).epsilon(1e-10));
    CHECK_THROWS_AS(make_bracket(sq, 2.0, 3.0), BracketError);
    // Deterministic: repeated calls agree bit for bit.
    const double a = find_root(j0, make_bracket(j0, 2.0, 3.0), 1e-9);
    const double b = find_root(j0, make_bracket(j0, 2.0, 3.0), 1e-9);
    CHECK(a == b);
  }
}
