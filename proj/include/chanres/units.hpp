#pragma once

// Natural units throughout: hbar = c = 1, energies in eV, lengths in 1/eV.

#include <string>

namespace chanres {

struct PhysicalConstants {
  static constexpr double hbar_c = 1.973269804e-7;  // eV m
  static constexpr double electron_mass = 5.10999e5;  // eV
};

inline constexpr double kPi = 3.14159265358979323846;

double degrees_to_radians(double degrees);
double radians_to_degrees(double radians);

/// Metres to 1/eV.
double to_natural_length(double length_si);
/// 1/eV to metres.
double to_si_length(double length_natural);

enum class Kinematics {
  Exact,             ///< p = sqrt(E^2 - mass^2)
  Ultrarelativistic  ///< p := E
};

struct BeamState {
  double total_energy = 0.0;         // E, eV
  double mass = 0.0;                 // eV
  double momentum = 0.0;             // p, eV
  double entry_angle = 0.0;          // theta0, rad
  double transverse_momentum = 0.0;  // p_perp = p theta0, eV

  /// Incident transverse energy p_perp^2 / 2E.
  double transverse_energy() const;
  /// Same beam at a different entry angle.
  BeamState with_angle(double theta0) const;
};

BeamState beam_from(double total_energy, double mass, double entry_angle,
                    Kinematics kinematics = Kinematics::Exact);

/// Attractive cylinder of depth V0 (> 0), radius R and length L.
struct StringPotential {
  double depth = 0.0;
  double radius = 0.0;
  double length = 0.0;

  /// Validates V0 >= 0, R > 0, L >= 0. The L > 2R geometry is checked by
  /// regime_check, not enforced here, so that limits like L -> 0 stay usable.
  static StringPotential make(double depth, double radius, double length);

  /// x0 = sqrt(2 E V0) R.
  double well_strength(double total_energy) const;
};

struct EffectiveScales {
  double rho_eff = 0.0;     // sqrt(L/p)
  double theta_eff = 0.0;   // 1/sqrt(pL)
  int m_max = 0;            // floor(p_perp rho_eff)
  double q_parallel = 0.0;  // 1/(p R^2)
};

EffectiveScales effective_scales(const BeamState& beam, const StringPotential& well);

struct RegimeCondition {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct RegimeReport {
  double pL = 0.0;
  double pR = 0.0;
  double theta_pR = 0.0;
  RegimeCondition long_string;    // pL / pR > 10
  RegimeCondition fast_particle;  // pR > 10
  RegimeCondition slow_transverse;  // theta0 pR < 1
  bool all_pass() const;
};

RegimeReport regime_check(const BeamState& beam, const StringPotential& well);

}  // namespace chanres
