#include "chanres/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chanres/errors.hpp"
#include "chanres/special_functions.hpp"

namespace chanres {

RadialMesh RadialMesh::make(const StringPotential& well, double rho_max, int points) {
  if (!(rho_max >= 20.0 * well.radius)) throw std::invalid_argument("mesh extent must be at least 20 R");
  if (points < 10000) throw std::invalid_argument("mesh needs at least 10^4 points");
  return RadialMesh{rho_max, points, rho_max / points};
}

RadialMesh RadialMesh::for_well(const StringPotential& well, int points, double extent_factor) {
  return make(well, extent_factor * well.radius, points);
}

int RadialOperator::count_below(double x) const {
  const Eigen::Index n = diagonal.size();
  int count = 0;
  double q = diagonal[0] - x;
  if (q < 0.0) ++count;
  for (Eigen::Index i = 1; i < n; ++i) {
    const double e = off_diagonal[i - 1];
    if (q == 0.0) q = 1e-300;
    q = diagonal[i] - x - e * e / q;
    if (q < 0.0) ++count;
  }
  return count;
}

double RadialOperator::eigenvalue(int k, double tolerance) const {
  // Gershgorin bounds.
  const Eigen::Index n = diagonal.size();
  double lo = diagonal[0], hi = diagonal[0];
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(off_diagonal[i - 1]) : 0.0) + (i + 1 < n ? std::abs(off_diagonal[i]) : 0.0);
    lo = std::min(lo, diagonal[i] - r);
    hi = std::max(hi, diagonal[i] + r);
  }
  for (int it = 0; it < 200 && hi - lo > tolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

RadialOperator radial_operator(const StringPotential& well, double total_energy, int m, const RadialMesh& mesh) {
  // Finite-volume cells centred at (i - 1/2) h with flux weights on the faces;
  // symmetrised by sqrt(rho_i). The wall sits one half-cell past the last centre.
  const int n = mesh.points;
  const double h = mesh.spacing;
  const double kinetic = 1.0 / (2.0 * total_energy * h * h);
  const double r = well.radius;
  RadialOperator op;
  op.diagonal.resize(n);
  op.off_diagonal.resize(n - 1);
  for (int i = 0; i < n; ++i) {
    const double centre = (i + 0.5) * h;
    const double inner = i * h;
    const double outer = (i + 1) * h;
    // Fraction of the cell's area inside the well.
    double inside = 0.0;
    if (outer <= r) {
      inside = 1.0;
    } else if (inner < r) {
      inside = (r * r - inner * inner) / (outer * outer - inner * inner);
    }
    op.diagonal[i] = kinetic * (inner + outer) / centre + m * m / (2.0 * total_energy * centre * centre) -
                     well.depth * inside;
    if (i + 1 < n) {
      const double next = (i + 1.5) * h;
      op.off_diagonal[i] = -kinetic * outer / std::sqrt(centre * next);
    }
  }
  return op;
}

namespace {

std::vector<FdLevel> negative_levels(const RadialOperator& op, double threshold, double tolerance) {
  std::vector<FdLevel> levels;
  const int count = op.count_below(threshold);
  for (int k = 0; k < count; ++k) levels.push_back(FdLevel{k + 1, op.eigenvalue(k, tolerance)});
  return levels;
}

}  // namespace

std::vector<FdLevel> fd_bound_states(const StringPotential& well, double total_energy, int m, const RadialMesh& mesh,
                                     double drift_tolerance) {
  if (m < 0) throw std::invalid_argument("azimuthal number m must be >= 0");
  if (!(total_energy > 0.0)) throw std::invalid_argument("total energy must be positive");
  const double threshold = -1e-6 * well.depth;
  if (!(well.depth > 0.0)) return {};
  const double tolerance = 1e-13 * well.depth;
  const auto coarse = negative_levels(radial_operator(well, total_energy, m, mesh), threshold, tolerance);
  RadialMesh fine = mesh;
  fine.points = 2 * mesh.points;
  fine.spacing = mesh.spacing / 2.0;
  const auto refined = negative_levels(radial_operator(well, total_energy, m, fine), threshold, tolerance);
  if (coarse.size() != refined.size()) {
    throw AccuracyError("mesh refinement changes the bound-state count for m = " + std::to_string(m));
  }
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    const double drift = std::abs(coarse[i].energy - refined[i].energy) / std::abs(refined[i].energy);
    if (drift > drift_tolerance) {
      throw AccuracyError("mesh too coarse: level " + std::to_string(i + 1) + " drifts by " + std::to_string(drift) +
                          " under refinement");
    }
  }
  return coarse;
}

double phase_shift(const StringPotential& well, double total_energy, int m, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("phase shift needs eps > 0");
  if (m < 0) throw std::invalid_argument("azimuthal number m must be >= 0");
  const double k = std::sqrt(2.0 * total_energy * eps);
  const double kin = std::sqrt(2.0 * total_energy * (eps + well.depth));
  const double a = kin * well.radius;
  const double x = k * well.radius;
  const double ja = bessel_j(m, a);
  const double dja = a * bessel_j_prime(m, a);
  const double num = x * bessel_j_prime(m, x) * ja - dja * bessel_j(m, x);
  const double den = x * bessel_y_prime(m, x) * ja - dja * bessel_y(m, x);
  double delta = std::atan2(num, den);
  if (delta > 0.5 * kPi) delta -= kPi;
  if (delta <= -0.5 * kPi) delta += kPi;
  return delta;
}

std::vector<double> linear_energy_grid(double lo, double hi, int points) {
  if (points < 2 || !(hi > lo)) throw std::invalid_argument("energy grid needs lo < hi and >= 2 points");
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = lo + (hi - lo) * i / (points - 1);
  return grid;
}

PhaseShiftCurve make_phase_curve(int m, const std::vector<double>& energies, const std::vector<double>& raw_delta) {
  if (energies.size() != raw_delta.size() || energies.size() < 3) {
    throw std::invalid_argument("phase curve needs matching energy and phase samples (>= 3)");
  }
  for (std::size_t i = 1; i < energies.size(); ++i) {
    if (!(energies[i] > energies[i - 1])) throw std::invalid_argument("energy grid must be strictly increasing");
  }
  PhaseShiftCurve c;
  c.m = m;
  c.energy = energies;
  c.delta = raw_delta;
  for (std::size_t i = 1; i < c.delta.size(); ++i) {
    while (c.delta[i] - c.delta[i - 1] > 0.5 * kPi) c.delta[i] -= kPi;
    while (c.delta[i] - c.delta[i - 1] < -0.5 * kPi) c.delta[i] += kPi;
  }
  const std::size_t n = c.energy.size();
  c.slope.resize(n);
  c.slope[0] = (c.delta[1] - c.delta[0]) / (c.energy[1] - c.energy[0]);
  c.slope[n - 1] = (c.delta[n - 1] - c.delta[n - 2]) / (c.energy[n - 1] - c.energy[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    // Three-point derivative on a non-uniform grid.
    const double h1 = c.energy[i] - c.energy[i - 1];
    const double h2 = c.energy[i + 1] - c.energy[i];
    c.slope[i] = (h1 * h1 * c.delta[i + 1] - h2 * h2 * c.delta[i - 1] + (h2 * h2 - h1 * h1) * c.delta[i]) /
                 (h1 * h2 * (h1 + h2));
  }
  return c;
}

PhaseShiftCurve phase_shift_curve(const StringPotential& well, double total_energy, int m,
                                  const std::vector<double>& energies) {
  std::vector<double> raw(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) raw[i] = phase_shift(well, total_energy, m, energies[i]);
  return make_phase_curve(m, energies, raw);
}

std::optional<PhaseResonance> resonance_from_phase(const PhaseShiftCurve& curve) {
  const std::size_t n = curve.slope.size();
  if (n < 3) throw std::invalid_argument("phase curve too short");
  std::size_t best = 0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const bool local_max = curve.slope[i] >= curve.slope[i - 1] && curve.slope[i] >= curve.slope[i + 1];
    if (local_max && (best == 0 || curve.slope[i] > curve.slope[best])) best = i;
  }
  std::vector<double> sorted = curve.slope;
  std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
  const double background = std::abs(sorted[n / 2]);
  if (best == 0 || !(curve.slope[best] > 2.0 * background) || !(curve.slope[best] > 0.0)) return std::nullopt;

  const double spacing = std::max(curve.energy[best + 1] - curve.energy[best], curve.energy[best] - curve.energy[best - 1]);
  if (spacing > 1.0 / 200.0) {
    throw AccuracyError("phase curve too coarse near its slope maximum (spacing " + std::to_string(spacing) + " eV)");
  }
  // Parabola through the three samples around the maximum.
  const double x0 = curve.energy[best - 1], x1 = curve.energy[best], x2 = curve.energy[best + 1];
  const double y0 = curve.slope[best - 1], y1 = curve.slope[best], y2 = curve.slope[best + 1];
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double curvature = (d12 - d01) / (x2 - x0);
  PhaseResonance r;
  r.energy = x1;
  r.peak_slope = y1;
  if (curvature < 0.0) {
    const double b = d01 - curvature * (x0 + x1);
    const double vertex = -b / (2.0 * curvature);
    if (vertex > x0 && vertex < x2) {
      r.energy = vertex;
      r.peak_slope = y1 + d01 * (vertex - x1) + curvature * (vertex - x0) * (vertex - x1);
    }
  }
  r.width = 2.0 / r.peak_slope;
  return r;
}

double parseval_audit(const ScatteringBasis& basis, double p_perp) { return 1.0 - completeness_fraction(basis, p_perp); }

}  // namespace chanres
