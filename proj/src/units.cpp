#include "chanres/units.hpp"

#include <cmath>
#include <stdexcept>

namespace chanres {

double degrees_to_radians(double degrees) { return degrees * kPi / 180.0; }
double radians_to_degrees(double radians) { return radians * 180.0 / kPi; }

double to_natural_length(double length_si) {
  if (!(length_si >= 0.0)) throw std::invalid_argument("length must be non-negative");
  return length_si / PhysicalConstants::hbar_c;
}

double to_si_length(double length_natural) {
  if (!(length_natural >= 0.0)) throw std::invalid_argument("length must be non-negative");
  return length_natural * PhysicalConstants::hbar_c;
}

double BeamState::transverse_energy() const {
  return transverse_momentum * transverse_momentum / (2.0 * total_energy);
}

BeamState BeamState::with_angle(double theta0) const {
  if (!(theta0 >= 0.0)) throw std::invalid_argument("entry angle must be non-negative");
  BeamState out = *this;
  out.entry_angle = theta0;
  out.transverse_momentum = momentum * theta0;
  return out;
}

BeamState beam_from(double total_energy, double mass, double entry_angle, Kinematics kinematics) {
  if (!(mass >= 0.0)) throw std::invalid_argument("mass must be non-negative");
  if (!(total_energy >= mass)) throw std::invalid_argument("total energy below rest mass");
  if (!(entry_angle >= 0.0)) throw std::invalid_argument("entry angle must be non-negative");
  BeamState beam;
  beam.total_energy = total_energy;
  beam.mass = mass;
  // (E - m)(E + m) keeps p accurate close to the rest-mass boundary.
  beam.momentum = kinematics == Kinematics::Ultrarelativistic
                      ? total_energy
                      : std::sqrt((total_energy - mass) * (total_energy + mass));
  beam.entry_angle = entry_angle;
  beam.transverse_momentum = beam.momentum * entry_angle;
  return beam;
}

StringPotential StringPotential::make(double depth, double radius, double length) {
  if (!(depth >= 0.0)) throw std::invalid_argument("well depth must be non-negative");
  if (!(radius > 0.0)) throw std::invalid_argument("well radius must be positive");
  if (!(length >= 0.0)) throw std::invalid_argument("string length must be non-negative");
  return StringPotential{depth, radius, length};
}

double StringPotential::well_strength(double total_energy) const {
  return std::sqrt(2.0 * total_energy * depth) * radius;
}

EffectiveScales effective_scales(const BeamState& beam, const StringPotential& well) {
  if (!(beam.momentum > 0.0)) throw std::invalid_argument("effective scales need p > 0");
  if (!(well.length > 0.0)) throw std::invalid_argument("effective scales need L > 0");
  EffectiveScales s;
  s.rho_eff = std::sqrt(well.length / beam.momentum);
  s.theta_eff = 1.0 / std::sqrt(beam.momentum * well.length);
  s.m_max = static_cast<int>(std::floor(beam.transverse_momentum * s.rho_eff));
  s.q_parallel = 1.0 / (beam.momentum * well.radius * well.radius);
  return s;
}

bool RegimeReport::all_pass() const {
  return long_string.pass && fast_particle.pass && slow_transverse.pass;
}

RegimeReport regime_check(const BeamState& beam, const StringPotential& well) {
  RegimeReport r;
  r.pL = beam.momentum * well.length;
  r.pR = beam.momentum * well.radius;
  r.theta_pR = beam.entry_angle * r.pR;
  const double ratio = r.pR > 0.0 ? r.pL / r.pR : 0.0;
  r.long_string = {"pL/pR > 10", ratio, 10.0, ratio > 10.0};
  r.fast_particle = {"pR > 10", r.pR, 10.0, r.pR > 10.0};
  r.slow_transverse = {"theta0*pR < 1", r.theta_pR, 1.0, r.theta_pR < 1.0};
  return r;
}

}  // namespace chanres
