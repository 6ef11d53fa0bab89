#pragma once

// Transition amplitudes, the forward scattering amplitude, and total cross
// sections of the string potential.
//
// Conventions. Transverse states Z = R(rho) exp(i m phi) are unit-normalised
// over the plane (bound) or over the quantisation disk (continuum). The
// overlap with a transverse plane wave is
//
//   Q(p, phi_p) = int d^2 rho Z exp(i p.rho) = 2 pi i^m e^{i m phi_p} int R J_m(p rho) rho drho.
//
// Cross sections use momentum-normalised plane waves, i.e. Q / (2 pi), so that
//
//   f = (p / 2 pi i) sum Qhat_i Qhat_f^* [exp(i (eps - eps_i) L) - 1],
//   sigma = (4 pi / p) Im f(forward) = 4 sum |Qhat_i|^2 sin^2((eps - eps_i) L / 2),
//
// with eps_i = p_perp^2 / 2E the incident transverse energy. For continuum
// states only the interaction part of the overlap enters the sums: the term
// that reproduces free propagation of the truncated plane wave is removed in
// closed form, so a vanishing potential scatters nothing.

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "chanres/spectrum.hpp"
#include "chanres/units.hpp"

namespace chanres {

struct BasisConfig {
  double disk_radius_factor = 50.0;  // D = factor * rho_eff
  double min_disk_radius_factor = 50.0;  // D >= factor * R, used when L is tiny
  double cutoff_factor = 10.0;       // momentum cutoff = factor / R
  int max_states_per_m = 2000;
  int max_m = -1;                    // -1 picks the partial-wave range from p_perp R
  int scan_oversampling = 8;         // quantisation samples per pi / D
  SpectrumConfig spectrum;
};

struct ScatteringBasis {
  double disk_radius = 0.0;
  double momentum_cutoff = 0.0;
  int max_m = 0;
  /// Ordered by (m, kind, eps): bound states of each m precede its continuum.
  std::vector<TransverseState> states;

  std::size_t bound_count() const;
  std::size_t continuum_count() const;
};

/// Partial waves m = 0..max_m; m >= 1 stands for the degenerate pair +-m.
int auto_partial_wave_limit(double transverse_momentum, double radius);

ScatteringBasis build_basis(const BeamState& beam, const StringPotential& well, const BasisConfig& config = {});

/// Continuum states of one partial wave on a Dirichlet disk, ascending in k.
std::vector<TransverseState> continuum_states(const StringPotential& well, double total_energy, int m,
                                              double disk_radius, double momentum_cutoff,
                                              int max_states, int oversampling = 8);

struct TransitionAmplitude {
  TransverseState state;
  double p_perp = 0.0;
  double azimuth = 0.0;
  std::complex<double> value;
};

/// Full overlap Q over the state's support (closed-form Lommel integrals).
/// Throws std::invalid_argument for states without a normalised wavefunction.
std::complex<double> overlap_Q(const TransverseState& state, double p_perp, double azimuth);

TransitionAmplitude transition_amplitude(const TransverseState& state, double p_perp, double azimuth);

/// int R J_m(p rho) rho drho in closed form; the radial factor of overlap_Q.
double overlap_radial(const TransverseState& state, double p_perp);

/// Same integral by adaptive Gauss-Kronrod quadrature.
double overlap_radial_quadrature(const TransverseState& state, double p_perp);

/// Interaction part of overlap_radial (equal to it for bound states).
double interaction_radial(const TransverseState& state, double p_perp);

/// (2 pi)^-1 Q_hat weights summed over the basis divided by the norm of the
/// plane wave restricted to the disk, within the basis' partial waves.
double completeness_fraction(const ScatteringBasis& basis, double p_perp);

struct StateContribution {
  int n = 0;
  int m = 0;
  StateKind kind = StateKind::BoundExact;
  double energy = 0.0;
  double contribution = 0.0;  // eV^-2, both +-m included
};

struct CrossSectionBreakdown {
  double total = 0.0;
  double continuum = 0.0;
  double bound = 0.0;
  double resonance = 0.0;
  std::vector<StateContribution> per_state;
  bool outside_regime = false;  // set when a formula is used outside its stated range
};

std::complex<double> amplitude_f(const BeamState& beam, const StringPotential& well, const ScatteringBasis& basis,
                                 double theta, double phi);

/// Optical-theorem cross section over the basis. Continuum states of m >= 1
/// below the centrifugal barrier top m^2 / 2ER^2 are booked as resonance.
/// Throws AccuracyError when the basis misses more than 5% of the incident
/// wave (Parseval deficit).
CrossSectionBreakdown sigma_total(const BeamState& beam, const StringPotential& well, const ScatteringBasis& basis);

/// The state sum behind sigma_total without the completeness audit, for
/// deliberately truncated bases.
CrossSectionBreakdown state_sum_sigma(const BeamState& beam, const StringPotential& well, const ScatteringBasis& basis);

/// Continuum baseline (2/pi) L / p.
double sigma_continuum_baseline(const BeamState& beam, const StringPotential& well);

/// Small-angle m = 0 cross section: baseline plus the bound-state sum
/// (2/pi) sum (|eps|/p) sin^2[(|eps| + p_perp^2/2p) L/2] / (|eps| + p_perp^2/2p)^2.
CrossSectionBreakdown sigma_small_angle_m0(const BeamState& beam, const StringPotential& well,
                                           std::span<const TransverseState> m0_bound_states);

CrossSectionBreakdown sigma_small_angle_m0(const BeamState& beam, const StringPotential& well,
                                           const SpectrumConfig& config = {});

}  // namespace chanres
