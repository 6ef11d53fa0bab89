#pragma once

// Transverse spectrum of the circular well of radius R and depth V0 with
// effective mass E (the particle's total energy):
//
//   -(1/2E) [R'' + R'/rho - m^2 R / rho^2] - V0 1{rho <= R} R = eps R.
//
// Wavefunctions are Z(rho, phi) = R(rho) exp(i m phi) with
// 2 pi int |R|^2 rho drho = 1 for bound states.

#include <vector>

#include "chanres/units.hpp"

namespace chanres {

enum class StateKind {
  BoundExact,              ///< J_m inside, K_m outside, matched at R
  QuasiBoundModel,         ///< (pi^2 n^2 + m^2) / 2ER^2 - V0, no wavefunction
  LevelExactInfiniteWell,  ///< j_{m,n}^2 / 2ER^2 - V0, no wavefunction
  ContinuumBox             ///< eps > 0 state of the well inside a Dirichlet disk
};

const char* to_string(StateKind kind);

struct TransverseState {
  int m = 0;
  int n = 0;
  double energy = 0.0;  // eps, eV
  StateKind kind = StateKind::BoundExact;
  double effective_mass = 0.0;  // E, eV
  double well_radius = 0.0;     // R, 1/eV
  double k_in = 0.0;            // sqrt(2E(eps + V0))
  double kappa_out = 0.0;       // sqrt(-2E eps), bound states
  double k_out = 0.0;           // sqrt(2E eps), continuum states
  double phase_shift = 0.0;     // exterior cos(d) J_m - sin(d) Y_m, continuum states
  double box_radius = 0.0;      // Dirichlet wall, continuum states

  // R(rho) = norm J_m(k_in rho) inside; exterior_coef K_m(kappa rho) or
  // exterior_coef [cos(d) J_m(k rho) - sin(d) Y_m(k rho)] outside.
  double norm = 0.0;
  double exterior_coef = 0.0;

  /// alpha = 2 p eps.
  double alpha(double momentum) const { return 2.0 * momentum * energy; }
  bool has_wavefunction() const;
  double radial(double rho) const;
  double radial_derivative(double rho) const;
  /// Interior minus exterior logarithmic derivative at R, divided by k_in.
  double matching_residual() const;
  /// 2 pi int |R|^2 rho drho over the support, from closed-form Lommel integrals.
  double norm_integral() const;
};

struct SpectrumConfig {
  int max_m = 20;
  /// Bisection stops once the energy is pinned to this many eV; zero means
  /// 1e-9 V0.
  double energy_tolerance = 0.0;
  int scan_intervals = 512;
  int grid_points = 10000;  // oracle mesh size used by cross-checks
};

/// All bound states of azimuthal number m, sorted by energy ascending.
std::vector<TransverseState> bound_states_exact(const StringPotential& well, double total_energy, int m,
                                                const SpectrumConfig& config = {});

/// Bound states for m = 0..config.max_m, ordered by (m, eps).
std::vector<TransverseState> bound_spectrum(const StringPotential& well, double total_energy,
                                            const SpectrumConfig& config = {});

TransverseState quasi_bound_level_model(const StringPotential& well, double total_energy, int n, int m);

TransverseState level_exact_infinite_well(const StringPotential& well, double total_energy, int n, int m);

struct LevelCount {
  double value = 0.0;  // sqrt(2 E V0 R^2) / pi
  int floor = 0;
};

LevelCount n_max(const StringPotential& well, double total_energy);

/// Energy below which each m carries a single model level: pi^2 / (2 V0 R^2).
double single_state_threshold(const StringPotential& well);

/// p_perp^2 / 2E minus the model level; zero on resonance.
double resonance_condition_residual(const BeamState& beam, const StringPotential& well, int n, int m);

/// Number of bound states predicted by the zero-energy matching limit:
/// m = 0 binds 1 + #{j_{1,k} < x0}, m >= 1 binds #{j_{m-1,k} < x0}.
int threshold_bound_state_count(double well_strength, int m);

}  // namespace chanres
