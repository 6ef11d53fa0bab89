#pragma once

// Independent cross-checks for the spectrum and scattering modules: a
// finite-volume radial eigensolver, exact partial-wave phase shifts of the
// circular well with resonance extraction, and completeness audits.

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "chanres/scattering.hpp"
#include "chanres/units.hpp"

namespace chanres {

struct RadialMesh {
  double rho_max = 0.0;
  int points = 0;
  double spacing = 0.0;

  /// Throws std::invalid_argument unless rho_max >= 20 R and points >= 1e4.
  static RadialMesh make(const StringPotential& well, double rho_max, int points);
  /// points cells over extent_factor * R.
  static RadialMesh for_well(const StringPotential& well, int points = 10000, double extent_factor = 20.0);
};

/// Symmetric tridiagonal form of the radial operator on the mesh cells.
struct RadialOperator {
  Eigen::VectorXd diagonal;
  Eigen::VectorXd off_diagonal;  // size points - 1
  /// Number of eigenvalues strictly below x (Sturm sequence count).
  int count_below(double x) const;
  /// k-th smallest eigenvalue (k from 0) by bisection.
  double eigenvalue(int k, double tolerance) const;
};

RadialOperator radial_operator(const StringPotential& well, double total_energy, int m, const RadialMesh& mesh);

struct FdLevel {
  int n = 0;
  double energy = 0.0;  // eV
};

/// Negative eigenvalues below -1e-6 V0, ascending. The same problem is solved
/// on a mesh with twice the points; a relative drift above drift_tolerance,
/// or a changed level count, throws AccuracyError.
std::vector<FdLevel> fd_bound_states(const StringPotential& well, double total_energy, int m, const RadialMesh& mesh,
                                     double drift_tolerance = 1e-4);

/// Principal-branch delta_m in (-pi/2, pi/2]; throws std::invalid_argument for eps <= 0.
double phase_shift(const StringPotential& well, double total_energy, int m, double eps);

struct PhaseShiftCurve {
  int m = 0;
  std::vector<double> energy;  // eV, strictly increasing
  std::vector<double> delta;   // rad, unwrapped
  std::vector<double> slope;   // d delta / d eps, rad/eV
};

PhaseShiftCurve phase_shift_curve(const StringPotential& well, double total_energy, int m,
                                  const std::vector<double>& energies);

/// Phase curve from given samples (unwrapped here, slopes by finite differences).
PhaseShiftCurve make_phase_curve(int m, const std::vector<double>& energies, const std::vector<double>& raw_delta);

/// Uniform grid of points energies on [lo, hi].
std::vector<double> linear_energy_grid(double lo, double hi, int points);

struct PhaseResonance {
  double energy = 0.0;  // eV
  double width = 0.0;   // eV
  double peak_slope = 0.0;
};

/// Largest interior maximum of the slope. Empty when it does not exceed twice
/// the median slope. AccuracyError when the grid near the peak is coarser
/// than 1/200 eV.
std::optional<PhaseResonance> resonance_from_phase(const PhaseShiftCurve& curve);

/// 1 - captured fraction of the incident wave (see completeness_fraction).
double parseval_audit(const ScatteringBasis& basis, double p_perp);

}  // namespace chanres
