#include "chanres/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "chanres/errors.hpp"
#include "chanres/scattering.hpp"
#include "chanres/special_functions.hpp"

namespace chanres {
namespace {

void check_quantum_numbers(int n, int m) {
  if (n < 1) throw std::invalid_argument("radial index n must be >= 1");
  if (m < 0) throw std::invalid_argument("azimuthal number m must be >= 0");
}

void check_closed_form(LevelVariant variant) {
  if (variant == LevelVariant::ExactMatching) {
    throw std::invalid_argument("exact-matching levels come from the phase-shift oracle, not a closed form");
  }
}

double width_factor(const StringPotential& well, double total_energy, int n, int m, LevelVariant variant) {
  const double strength2 = 2.0 * total_energy * well.depth * well.radius * well.radius;
  return std::exp(-std::sqrt(std::abs(strength2 - width_eigenvalue(n, m, variant))));
}

}  // namespace

const char* to_string(LevelVariant variant) {
  switch (variant) {
    case LevelVariant::Model:
      return "model";
    case LevelVariant::ExactZero:
      return "exact-zero";
    case LevelVariant::ExactMatching:
      return "exact-matching";
  }
  return "unknown";
}

LevelVariant parse_level_variant(std::string_view text) {
  if (text == "model") return LevelVariant::Model;
  if (text == "exact-zero") return LevelVariant::ExactZero;
  if (text == "exact-matching") return LevelVariant::ExactMatching;
  throw std::invalid_argument("unknown level variant '" + std::string(text) + "'");
}

double level_eigenvalue(int n, int m, LevelVariant variant) {
  check_quantum_numbers(n, m);
  check_closed_form(variant);
  if (variant == LevelVariant::ExactZero) {
    const double j = bessel_j_zero(m, n);
    return j * j;
  }
  return kPi * kPi * n * n + static_cast<double>(m) * m;
}

double width_eigenvalue(int n, int m, LevelVariant variant) {
  check_quantum_numbers(n, m);
  check_closed_form(variant);
  if (variant == LevelVariant::ExactZero) {
    const double j = bessel_j_zero(m, n);
    return j * j - static_cast<double>(m) * m;
  }
  return kPi * kPi * n * n;
}

double theta_res(const StringPotential& well, double total_energy, int n, int m, LevelVariant variant) {
  if (!(total_energy > 0.0)) throw std::invalid_argument("total energy must be positive");
  const double er = total_energy * well.radius;
  const double level = level_eigenvalue(n, m, variant) / (er * er);
  const double binding = 2.0 * well.depth / total_energy;
  double arg = level - binding;
  // Cancellation at the threshold itself leaves a few ulp of either sign.
  if (std::abs(arg) <= 8.0 * std::numeric_limits<double>::epsilon() * level) arg = 0.0;
  if (arg < 0.0) {
    throw NoResonanceError("level (" + std::to_string(n) + "," + std::to_string(m) +
                           ") lies below the continuum at this energy");
  }
  return std::sqrt(arg);
}

double gamma_angle(const StringPotential& well, double total_energy, int n, int m, LevelVariant variant) {
  return theta_res(well, total_energy, n, m, variant) * width_factor(well, total_energy, n, m, variant);
}

double breit_wigner_excess(double x, double x_res, double width, double peak) {
  const double h2 = 0.25 * width * width;
  const double d = x - x_res;
  return peak * h2 / (d * d + h2);
}

double sigma_peak_excess(const BeamState& beam, const StringPotential& well) {
  if (!(beam.momentum > 0.0)) throw std::invalid_argument("momentum must be positive");
  return 2.0 / kPi * well.length / beam.momentum;
}

double sigma_bw_angle(const BeamState& beam, const StringPotential& well, int n, int m, LevelVariant variant) {
  const double peak = sigma_peak_excess(beam, well);
  const double centre = theta_res(well, beam.total_energy, n, m, variant);
  const double width = gamma_angle(well, beam.total_energy, n, m, variant);
  return sigma_continuum_baseline(beam, well) + breit_wigner_excess(beam.entry_angle, centre, width, peak);
}

double e_res(const StringPotential& well, double theta0, int n, int m, LevelVariant variant, bool printed_form) {
  if (!(theta0 > 0.0)) throw std::invalid_argument("resonance energy needs theta0 > 0");
  const double lambda = level_eigenvalue(n, m, variant) / (well.radius * well.radius);
  const double t2 = theta0 * theta0;
  const double v = well.depth;
  if (printed_form) return (2.0 * v + std::sqrt(4.0 * v * v + 4.0 * t2 * lambda)) / t2;
  // -V0 + sqrt(V0^2 + t2 lambda) rewritten without cancellation.
  return lambda / (v + std::sqrt(v * v + t2 * lambda));
}

double gamma_energy(const StringPotential& well, double resonance_energy, int n) {
  return gamma_energy(well, resonance_energy, n, 0, LevelVariant::Model);
}

double gamma_energy(const StringPotential& well, double resonance_energy, int n, int m, LevelVariant variant) {
  if (!(resonance_energy > 0.0)) throw std::invalid_argument("resonance energy must be positive");
  return resonance_energy * width_factor(well, resonance_energy, n, m, variant);
}

double sigma_bw_energy(const BeamState& beam, const StringPotential& well, int n, int m, LevelVariant variant,
                       bool printed_form) {
  const double centre = e_res(well, beam.entry_angle, n, m, variant, printed_form);
  // Peak height taken at E_res so the line is symmetric in E.
  const bool ultrarelativistic = beam.momentum == beam.total_energy;
  const double mass = ultrarelativistic ? 0.0 : std::min(beam.mass, centre);
  const double peak = sigma_peak_excess(beam_from(centre, mass, beam.entry_angle), well);
  const double width = gamma_energy(well, centre, n, m, variant);
  return sigma_continuum_baseline(beam, well) + breit_wigner_excess(beam.total_energy, centre, width, peak);
}

ResonancePrediction predict_resonance(const BeamState& beam, const StringPotential& well, int n, int m,
                                      LevelVariant variant, bool printed_form) {
  ResonancePrediction r;
  r.n = n;
  r.m = m;
  r.theta_res = theta_res(well, beam.total_energy, n, m, variant);
  r.gamma = gamma_angle(well, beam.total_energy, n, m, variant);
  r.at_threshold = r.theta_res == 0.0;
  r.e_res = beam.entry_angle > 0.0 ? e_res(well, beam.entry_angle, n, m, variant, printed_form) : beam.total_energy;
  r.gamma_bar = gamma_energy(well, r.e_res, n, m, variant);
  r.sigma_peak_excess = sigma_peak_excess(beam, well);
  return r;
}

}  // namespace chanres
