#pragma once

// Scenario description, angle and energy scan drivers, flat-text config
// ingestion and CSV emission.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chanres/resonance.hpp"
#include "chanres/scattering.hpp"
#include "chanres/units.hpp"

namespace chanres {

/// Malformed or unknown configuration input.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ScanKind { Angle, Energy };

struct BeamSpec {
  double energy_ev = 0.0;
  double mass_ev = 0.0;
  double angle_deg = 0.0;  // entry angle for energy scans and single-point reports
};

struct WellSpec {
  double depth_ev = 0.0;
  double inverse_radius_ev = 0.0;  // 1/R
  double length_m = 0.0;
};

struct ScanSpec {
  ScanKind kind = ScanKind::Angle;
  double min = 0.0;  // degrees (angle) or MeV (energy)
  double max = 0.0;
  int points = 0;
};

struct ModelSpec {
  bool ultrarelativistic = false;
  bool printed_e_res = false;
  LevelVariant level_variant = LevelVariant::Model;
  /// "auto" or a comma list of n:m pairs, e.g. "1:1,1:2".
  std::string resonances = "auto";
};

struct OracleSpec {
  int mesh_points = 10000;
  double mesh_extent = 20.0;  // multiples of R
};

struct Scenario {
  std::string name;
  BeamSpec beam;
  WellSpec well;
  ScanSpec scan;
  ModelSpec model;
  OracleSpec oracle;

  /// Throws ConfigError when an invariant fails.
  void validate() const;
  StringPotential potential() const;
  Kinematics kinematics() const;
  /// Beam at the configured energy and entry angle.
  BeamState beam_state() const;
};

/// Si <111>, 15 MeV electrons, 1.4 um crystal; angle scan 0-0.2 deg, 2001 points.
Scenario preset_si111();
/// Same crystal at a fixed 0.1 deg entry angle, energy scan 5-25 MeV.
Scenario preset_si111_energy();

/// Applies `section.key = value` lines on top of base. '#' starts a comment.
Scenario parse_config(std::string_view text, Scenario base = preset_si111());
Scenario load_config(const std::string& path, Scenario base = preset_si111());

/// Sorted key = value lines covering every field.
std::string canonical_config(const Scenario& scenario);
/// FNV-1a 64 of the canonical text, as 16 hex digits.
std::string config_hash(const Scenario& scenario);

std::vector<std::pair<int, int>> parse_level_list(std::string_view text);

struct ResonanceAnnotation {
  int n = 0;
  int m = 0;
  double position = 0.0;  // rad (angle scans) or eV (energy scans)
  double width = 0.0;     // rad or eV
};

struct ScanResult {
  Scenario scenario;
  std::vector<double> x;  // degrees or MeV
  std::vector<CrossSectionBreakdown> points;
  std::vector<ResonanceAnnotation> annotations;
};

/// Resonances whose position lies inside the scan window.
std::vector<ResonanceAnnotation> scan_resonances(const Scenario& scenario);

/// Baseline plus the m = 0 bound-state term for theta0 <= 1/sqrt(pL), plus
/// the Breit-Wigner terms of the in-window resonances.
ScanResult run_angle_scan(const Scenario& scenario, int threads = 1);
/// Baseline (2/pi) L / p(E) plus energy Breit-Wigner terms at fixed theta0.
ScanResult run_energy_scan(const Scenario& scenario, int threads = 1);
ScanResult run_scan(const Scenario& scenario, int threads = 1);

/// sigma_small_angle_m0 over the angle grid, without the validity gate.
std::vector<double> small_angle_bound_profile(const Scenario& scenario, int threads = 1);

/// Twelve significant digits, '.' separator, independent of locale.
std::string format_number(double value);

void emit_csv(const ScanResult& result, std::ostream& out);
/// Throws std::runtime_error when the destination cannot be written.
void emit_csv(const ScanResult& result, const std::string& path);

/// Worker count: explicit value if positive, else STRING_RESONANCE_THREADS, else 1.
int resolve_thread_count(int requested);

}  // namespace chanres
