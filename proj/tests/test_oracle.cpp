#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "chanres/errors.hpp"
#include "chanres/oracle.hpp"
#include "chanres/special_functions.hpp"
#include "chanres/spectrum.hpp"
#include "reference_values.hpp"
#include "support/random_grid.hpp"

using namespace chanres;

namespace {
constexpr double kE = 15e6;
constexpr double kMass = 5.10999e5;
StringPotential si_well() { return StringPotential::make(23.0, 1.0 / 9.7e3, to_natural_length(1.4e-6)); }

StringPotential well_with_strength(double x0) {
  const double r = 1.0 / 9.7e3;
  return StringPotential::make(x0 * x0 / (2.0 * kE * r * r), r, 7.0);
}

// Mesh wide enough for the shallowest exact level: 40 decay lengths, at
// least 20 R, at the default cell size of 20 R / 10^4.
RadialMesh mesh_for(const StringPotential& w, const std::vector<TransverseState>& exact) {
  double extent = 20.0;
  for (const auto& s : exact) extent = std::max(extent, 40.0 / (s.kappa_out * w.radius));
  const int points = static_cast<int>(std::ceil(10000.0 * extent / 20.0));
  return RadialMesh::make(w, extent * w.radius, points);
}

bool near_threshold(double x0) {
  // Binding thresholds of m = 0, 1, 2 below 9: zeros of J_1, J_0, J_1.
  for (int m : {0, 1}) {
    for (int k = 1; k <= 3; ++k) {
      if (std::abs(x0 - bessel_j_zero(m, k)) < 0.15) return true;
    }
  }
  return false;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
  return g;
}
}  // namespace

TEST_SUITE("oracle_validation") {
  TEST_CASE("mesh invariants") {
    const StringPotential w = si_well();
    const RadialMesh m = RadialMesh::for_well(w);
    CHECK(m.points == 10000);
    CHECK(m.rho_max == doctest::Approx(20.0 * w.radius));
    CHECK(m.spacing == doctest::Approx(m.rho_max / m.points));
    CHECK_THROWS_AS(RadialMesh::make(w, 10.0 * w.radius, 10000), std::invalid_argument);
    CHECK_THROWS_AS(RadialMesh::make(w, 20.0 * w.radius, 9999), std::invalid_argument);
  }

  TEST_CASE("finite-volume levels match the matching solver for silicon") {
    const StringPotential w = si_well();
    const auto fd0 = fd_bound_states(w, kE, 0, RadialMesh::for_well(w));
    const auto fd1 = fd_bound_states(w, kE, 1, RadialMesh::for_well(w));
    REQUIRE(fd0.size() == 1);
    REQUIRE(fd1.size() == 1);
    CHECK(fd0[0].energy == doctest::Approx(reference::kSiBoundEnergyM0).epsilon(1e-3));
    CHECK(fd1[0].energy == doctest::Approx(reference::kSiBoundEnergyM1).epsilon(1e-3));
    CHECK(fd_bound_states(w, kE, 2, RadialMesh::for_well(w)).empty());
  }

  TEST_CASE("no levels without a well") {
    const StringPotential free = StringPotential::make(0.0, 1.0 / 9.7e3, 7.0);
    CHECK(fd_bound_states(free, kE, 0, RadialMesh::for_well(free)).empty());
  }

  TEST_CASE("refinement study") {
    const StringPotential w = si_well();
    const double a = fd_bound_states(w, kE, 0, RadialMesh::for_well(w, 10000)).at(0).energy;
    const double b = fd_bound_states(w, kE, 0, RadialMesh::for_well(w, 40000)).at(0).energy;
    CHECK(std::abs(a - b) < 1e-4 * std::abs(b));
  }

  TEST_CASE("coarse mesh breaches the accuracy contract") {
    const StringPotential w = si_well();
    CHECK_THROWS_AS(fd_bound_states(w, kE, 0, RadialMesh::for_well(w, 10000, 2000.0)), AccuracyError);
  }

  TEST_CASE("solver against solver on randomized wells") {
    testing_support::Rng rng(61);
    int wells = 0;
    while (wells < 5) {
      const double x0 = rng.uniform(1.0, 8.0);
      if (near_threshold(x0)) continue;
      ++wells;
      const StringPotential w = well_with_strength(x0);
      for (int m = 0; m <= 2; ++m) {
        const auto exact = bound_states_exact(w, kE, m);
        const auto fd = fd_bound_states(w, kE, m, mesh_for(w, exact));
        INFO("x0 = " << x0 << ", m = " << m);
        REQUIRE(fd.size() == exact.size());
        CHECK(static_cast<int>(fd.size()) == threshold_bound_state_count(x0, m));
        for (std::size_t i = 0; i < fd.size(); ++i) {
          CHECK(fd[i].energy == doctest::Approx(exact[i].energy).epsilon(1e-3));
        }
      }
    }
  }

  TEST_CASE("binding threshold of m = 1 follows j_{0,1}") {
    for (double x0 : {1.0, 2.708, 5.0, 8.0}) {
      const StringPotential w = well_with_strength(x0);
      const auto exact = bound_states_exact(w, kE, 1);
      const auto fd = fd_bound_states(w, kE, 1, mesh_for(w, exact));
      CHECK((fd.size() >= 1) == (x0 > bessel_j_zero(0, 1)));
    }
  }

  TEST_CASE("phase shift basics") {
    const StringPotential free = StringPotential::make(0.0, 1.0 / 9.7e3, 7.0);
    testing_support::Rng rng(62);
    for (int i = 0; i < 100; ++i) {
      CHECK(phase_shift(free, kE, rng.integer(0, 6), rng.log_uniform(1e-3, 1e4)) == 0.0);
    }
    CHECK_THROWS_AS(phase_shift(si_well(), kE, 0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(phase_shift(si_well(), kE, 0, -1.0), std::invalid_argument);
    // Born-like decay at high transverse energy.
    CHECK(std::abs(phase_shift(si_well(), kE, 0, 1e7)) < 0.01);
    CHECK(std::abs(phase_shift(si_well(), kE, 3, 1e7)) < 0.01);
  }

  TEST_CASE("Levinson-style phase drop") {
    for (double x0 : {1.5, 2.708, 5.0, 8.0}) {
      const StringPotential w = well_with_strength(x0);
      for (int m = 0; m <= 2; ++m) {
        const auto curve = phase_shift_curve(w, kE, m, log_grid(1e-10 * w.depth, 1e5 * w.depth, 6000));
        const double drop = curve.delta.front() - curve.delta.back();
        const double expected = kPi * static_cast<double>(bound_states_exact(w, kE, m).size());
        INFO("x0 = " << x0 << ", m = " << m << ", drop = " << drop);
        CHECK(std::abs(drop - expected) <= 0.15 * std::max(expected, kPi));
      }
    }
  }

  TEST_CASE("silicon m = 1 scan near the model level") {
    // The model level sits at +11.09 eV. The exact well binds its m = 1 state
    // instead and the phase slope shows no interior maximum in (0, 40] eV.
    const auto curve = phase_shift_curve(si_well(), kE, 1, linear_energy_grid(0.0025, 40.0, 16000));
    CHECK_FALSE(resonance_from_phase(curve).has_value());
    for (std::size_t i = 1; i < curve.delta.size(); ++i) {
      CHECK(std::abs(curve.delta[i] - curve.delta[i - 1]) < 0.5 * kPi);
    }
  }

  TEST_CASE("synthetic Breit-Wigner phase round trip") {
    const double e0 = 5.0, width = 0.4;
    std::vector<double> eps, raw;
    for (int i = 1; i <= 4000; ++i) {
      const double e = 0.0025 * i;
      eps.push_back(e);
      raw.push_back(std::atan2(0.5 * width, e0 - e));
    }
    const auto r = resonance_from_phase(make_phase_curve(1, eps, raw));
    REQUIRE(r.has_value());
    CHECK(r->energy == doctest::Approx(e0).epsilon(0.01));
    CHECK(r->width == doctest::Approx(width).epsilon(0.01));
  }

  TEST_CASE("slow monotone phase has no resonance") {
    std::vector<double> eps, raw;
    for (int i = 1; i <= 2000; ++i) {
      eps.push_back(0.0025 * i);
      raw.push_back(0.1 * std::log(eps.back()));
    }
    CHECK_FALSE(resonance_from_phase(make_phase_curve(0, eps, raw)).has_value());
  }

  TEST_CASE("unresolved phase curve") {
    std::vector<double> eps, raw;
    for (int i = 1; i <= 100; ++i) {
      eps.push_back(0.1 * i);
      raw.push_back(std::atan2(0.5, 5.0 - eps.back()));
    }
    CHECK_THROWS_AS(resonance_from_phase(make_phase_curve(0, eps, raw)), AccuracyError);
  }

  TEST_CASE("deeper synthetic family resonates lower") {
    // Level at (lambda - 2 E V0 R^2) / 2ER^2 for a fixed eigenvalue lambda.
    double previous = 1e300;
    for (double depth : {2.0, 4.0, 8.0}) {
      const double e0 = 10.0 - depth;
      std::vector<double> eps, raw;
      for (int i = 1; i <= 4000; ++i) {
        eps.push_back(0.0025 * i);
        raw.push_back(std::atan2(0.15, e0 - eps.back()));
      }
      const auto r = resonance_from_phase(make_phase_curve(2, eps, raw));
      REQUIRE(r.has_value());
      CHECK(r->energy < previous);
      previous = r->energy;
    }
  }

  TEST_CASE("phase curve unwrapping") {
    const auto c = make_phase_curve(0, {1.0, 2.0, 3.0, 4.0}, {1.4, -1.5, 1.3, -1.6});
    for (std::size_t i = 1; i < c.delta.size(); ++i) CHECK(std::abs(c.delta[i] - c.delta[i - 1]) <= 0.5 * kPi);
    CHECK_THROWS_AS(make_phase_curve(0, {1.0, 1.0, 2.0}, {0.0, 0.0, 0.0}), std::invalid_argument);
  }

  TEST_CASE("Parseval audits") {
    const StringPotential w = si_well();
    const StringPotential free = StringPotential::make(0.0, w.radius, w.length);
    const BeamState b0 = beam_from(kE, kMass, 0.0);
    CHECK(parseval_audit(build_basis(b0, w), 0.0) < 0.01);
    testing_support::Rng rng(63);
    for (int i = 0; i < 3; ++i) {
      const BeamState b = b0.with_angle(degrees_to_radians(rng.uniform(0.0, 0.05)));
      CHECK(parseval_audit(build_basis(b, free), b.transverse_momentum) < 1e-3);
    }
    BasisConfig half;
    half.cutoff_factor = 5.0;
    BasisConfig quarter;
    quarter.cutoff_factor = 2.5;
    const double full_deficit = parseval_audit(build_basis(b0, w), 0.0);
    const double half_deficit = parseval_audit(build_basis(b0, w, half), 0.0);
    const double quarter_deficit = parseval_audit(build_basis(b0, w, quarter), 0.0);
    CHECK(full_deficit < half_deficit);
    CHECK(half_deficit < quarter_deficit);
  }
}
