#pragma once

// Closed-form Breit-Wigner predictions for quasi-bound (n, m) levels:
// resonance angle and angular width at fixed energy, resonance energy and
// energy width at fixed entry angle, and the corresponding Lorentzian cross
// sections on top of the continuum baseline (2/pi) L / p.

#include <string>
#include <string_view>

#include "chanres/units.hpp"

namespace chanres {

/// Which eigenvalue stands for the level: pi^2 n^2 + m^2 (model), the
/// infinite-circular-well value j_{m,n}^2 (exact-zero), or levels extracted
/// from the exact phase shift (exact-matching, see oracle.hpp).
enum class LevelVariant { Model, ExactZero, ExactMatching };

const char* to_string(LevelVariant variant);
/// Accepts "model", "exact-zero", "exact-matching"; throws std::invalid_argument.
LevelVariant parse_level_variant(std::string_view text);

/// Dimensionless level eigenvalue: pi^2 n^2 + m^2 or j_{m,n}^2.
double level_eigenvalue(int n, int m, LevelVariant variant = LevelVariant::Model);
/// Eigenvalue used in the tunnelling exponent: pi^2 n^2 or j_{m,n}^2 - m^2.
double width_eigenvalue(int n, int m, LevelVariant variant = LevelVariant::Model);

/// theta_res = sqrt(lambda / (E R)^2 - 2 V0 / E). Throws NoResonanceError
/// when the argument is negative; returns 0 at the threshold itself.
double theta_res(const StringPotential& well, double total_energy, int n, int m,
                 LevelVariant variant = LevelVariant::Model);

/// Gamma = theta_res exp(-|2 E V0 R^2 - lambda_w|^(1/2)).
double gamma_angle(const StringPotential& well, double total_energy, int n, int m,
                   LevelVariant variant = LevelVariant::Model);

/// Lorentzian excess peak (Gamma^2/4) / ((x - x_res)^2 + Gamma^2/4).
double breit_wigner_excess(double x, double x_res, double width, double peak);

/// Peak excess (2/pi) L / p, identical to the continuum baseline.
double sigma_peak_excess(const BeamState& beam, const StringPotential& well);

/// sigma_0 plus the (n, m) angular Lorentzian at the beam's entry angle.
double sigma_bw_angle(const BeamState& beam, const StringPotential& well, int n, int m,
                      LevelVariant variant = LevelVariant::Model);

/// Positive root of theta0^2 E^2 + 2 V0 E - lambda / R^2 = 0. With
/// printed_form the alternative theta0^-2 [2 V0 + sqrt(4 V0^2 + 4 theta0^2 lambda / R^2)]
/// is returned instead, kept for comparison; it does not invert theta_res.
double e_res(const StringPotential& well, double theta0, int n, int m, LevelVariant variant = LevelVariant::Model,
             bool printed_form = false);

/// Gamma_bar = E_res exp(-|2 E_res V0 R^2 - pi^2 n^2|^(1/2)).
double gamma_energy(const StringPotential& well, double resonance_energy, int n);
double gamma_energy(const StringPotential& well, double resonance_energy, int n, int m, LevelVariant variant);

/// sigma_0(E) plus the energy Lorentzian centred on E_res(theta0) for the beam's energy.
double sigma_bw_energy(const BeamState& beam, const StringPotential& well, int n, int m,
                       LevelVariant variant = LevelVariant::Model, bool printed_form = false);

struct ResonancePrediction {
  int n = 0;
  int m = 0;
  double theta_res = 0.0;       // rad, at the beam energy
  double gamma = 0.0;           // rad
  double e_res = 0.0;           // eV, at the beam entry angle (beam energy when theta0 = 0)
  double gamma_bar = 0.0;       // eV
  double sigma_peak_excess = 0.0;  // eV^-2
  bool at_threshold = false;    // theta_res == 0
};

/// Throws NoResonanceError when theta_res is undefined at the beam energy.
ResonancePrediction predict_resonance(const BeamState& beam, const StringPotential& well, int n, int m,
                                      LevelVariant variant = LevelVariant::Model, bool printed_form = false);

}  // namespace chanres
