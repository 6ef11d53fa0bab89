#include "chanres/spectrum.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "chanres/special_functions.hpp"

namespace chanres {
namespace {

void check_energy(double total_energy) {
  if (!(total_energy > 0.0)) throw std::invalid_argument("total energy must be positive");
}

void check_quantum_numbers(int n, int m) {
  if (n < 1) throw std::invalid_argument("radial index n must be >= 1");
  if (m < 0) throw std::invalid_argument("azimuthal number m must be >= 0");
}

// J_{m-1} with J_{-1} = -J_1, K_{m-1} with K_{-1} = K_1.
double j_lower(int m, double x) { return m == 0 ? -bessel_j(1, x) : bessel_j(m - 1, x); }

// b K_m'(b) / K_m(b) = m - b K_{m+1}(b) / K_m(b); the b -> 0 limit is 0 for
// m = 0 and -m otherwise.
double k_log_derivative(int m, double b) {
  if (b <= 0.0) return m == 0 ? 0.0 : -static_cast<double>(m);
  return m - b * bessel_k_scaled(m + 1, b) / bessel_k_scaled(m, b);
}

// a J_m'(a) = m J_m(a) - a J_{m+1}(a)
double j_scaled_derivative(int m, double a) { return m * bessel_j(m, a) - a * bessel_j(m + 1, a); }

// Interior/exterior matching function, free of poles in a.
double matching_function(int m, double a, double x0) {
  const double b = std::sqrt(std::max(0.0, (x0 - a) * (x0 + a)));
  return j_scaled_derivative(m, a) - k_log_derivative(m, b) * bessel_j(m, a);
}

// x int Z_m(x)^2 dx = (x^2/2) [Z_m^2 - Z_{m-1} Z_{m+1}] for any cylinder function.
double lommel_square(double x, double zm, double zlower, double zupper) {
  return 0.5 * x * x * (zm * zm - zlower * zupper);
}

double cylinder(int m, double x, double phase) {
  // cos(d) J_m - sin(d) Y_m with Y_{-1} = -Y_1.
  if (m < 0) return -(std::cos(phase) * bessel_j(1, x) - std::sin(phase) * bessel_y(1, x));
  return std::cos(phase) * bessel_j(m, x) - std::sin(phase) * bessel_y(m, x);
}

}  // namespace

const char* to_string(StateKind kind) {
  switch (kind) {
    case StateKind::BoundExact:
      return "bound-exact";
    case StateKind::QuasiBoundModel:
      return "quasi-bound-model";
    case StateKind::LevelExactInfiniteWell:
      return "level-exact-infinite-well";
    case StateKind::ContinuumBox:
      return "continuum";
  }
  return "unknown";
}

bool TransverseState::has_wavefunction() const {
  const bool kind_ok = kind == StateKind::BoundExact || kind == StateKind::ContinuumBox;
  return kind_ok && std::isfinite(norm) && norm != 0.0 && well_radius > 0.0;
}

double TransverseState::radial(double rho) const {
  if (rho <= well_radius) return norm * bessel_j(m, k_in * rho);
  if (kind == StateKind::BoundExact) {
    // Ratio of scaled K keeps the tail finite far from the well.
    const double b = kappa_out * well_radius;
    return exterior_coef * bessel_k_scaled(m, kappa_out * rho) / bessel_k_scaled(m, b) *
           std::exp(-kappa_out * (rho - well_radius)) * bessel_k(m, b);
  }
  if (rho > box_radius) return 0.0;
  return exterior_coef * cylinder(m, k_out * rho, phase_shift);
}

double TransverseState::radial_derivative(double rho) const {
  if (rho <= well_radius) return norm * k_in * bessel_j_prime(m, k_in * rho);
  if (kind == StateKind::BoundExact) return exterior_coef * kappa_out * bessel_k_prime(m, kappa_out * rho);
  if (rho > box_radius) return 0.0;
  const double x = k_out * rho;
  const double lower = cylinder(m - 1, x, phase_shift);
  const double upper = cylinder(m + 1, x, phase_shift);
  return exterior_coef * k_out * 0.5 * (lower - upper);
}

double TransverseState::matching_residual() const {
  const double a = k_in * well_radius;
  const double inside = j_scaled_derivative(m, a) / bessel_j(m, a);
  double outside = 0.0;
  if (kind == StateKind::BoundExact) {
    outside = k_log_derivative(m, kappa_out * well_radius);
  } else {
    const double x = k_out * well_radius;
    const double c = cylinder(m, x, phase_shift);
    outside = x * 0.5 * (cylinder(m - 1, x, phase_shift) - cylinder(m + 1, x, phase_shift)) / c;
  }
  return (inside - outside) / a;
}

double TransverseState::norm_integral() const {
  const double a = k_in * well_radius;
  const double interior = norm * norm / (k_in * k_in) *
                          lommel_square(a, bessel_j(m, a), j_lower(m, a), bessel_j(m + 1, a));
  double exterior = 0.0;
  if (kind == StateKind::BoundExact) {
    const double b = kappa_out * well_radius;
    // int_b^inf x K_m^2 dx = (b^2/2)[K_{m-1} K_{m+1} - K_m^2], via ratios of scaled K.
    const double km = bessel_k_scaled(m, b);
    const double ratio = bessel_k_scaled(m == 0 ? 1 : m - 1, b) * bessel_k_scaled(m + 1, b) / (km * km);
    const double value_at_r = exterior_coef * bessel_k(m, b);
    exterior = value_at_r * value_at_r / (kappa_out * kappa_out) * 0.5 * b * b * (ratio - 1.0);
  } else if (kind == StateKind::ContinuumBox) {
    const double x1 = k_out * well_radius;
    const double x2 = k_out * box_radius;
    auto prim = [&](double x) {
      return lommel_square(x, cylinder(m, x, phase_shift), cylinder(m - 1, x, phase_shift),
                           cylinder(m + 1, x, phase_shift));
    };
    exterior = exterior_coef * exterior_coef / (k_out * k_out) * (prim(x2) - prim(x1));
  }
  return 2.0 * kPi * (interior + exterior);
}

std::vector<TransverseState> bound_states_exact(const StringPotential& well, double total_energy, int m,
                                                const SpectrumConfig& config) {
  check_energy(total_energy);
  if (m < 0) throw std::invalid_argument("azimuthal number m must be >= 0");
  std::vector<TransverseState> states;
  if (well.depth <= 0.0) return states;

  const double x0 = well.well_strength(total_energy);
  const double r = well.radius;
  const double two_e_r2 = 2.0 * total_energy * r * r;
  const double tol_energy = config.energy_tolerance > 0.0 ? config.energy_tolerance : 1e-9 * well.depth;
  const double tol_a = std::min(tol_energy * two_e_r2 / (2.0 * x0), 1e-14 * x0);
  const int intervals = std::max(config.scan_intervals, 8);

  auto g = [&](double a) { return matching_function(m, a, x0); };
  double a_prev = x0 / intervals;
  double g_prev = g(a_prev);
  for (int i = 2; i <= intervals; ++i) {
    const double a = x0 * i / intervals;
    const double ga = g(a);  // at i == intervals this is the b -> 0 limit
    if (g_prev == 0.0 || (g_prev < 0.0) != (ga < 0.0)) {
      const double root = g_prev == 0.0 ? a_prev : find_root(g, RootBracket{a_prev, a, g_prev, ga}, tol_a);
      const double b = std::sqrt(std::max(0.0, (x0 - root) * (x0 + root)));
      if (b > 0.0 && root > 0.0) {
        TransverseState s;
        s.m = m;
        s.kind = StateKind::BoundExact;
        s.effective_mass = total_energy;
        s.well_radius = r;
        s.k_in = root / r;
        s.kappa_out = b / r;
        s.energy = -b * b / two_e_r2;
        s.n = bessel_j_zero_count(m, root) + 1;
        // Continuity at R with unit interior coefficient, then normalise.
        s.norm = 1.0;
        s.exterior_coef = bessel_j(m, root) / bessel_k(m, b);
        const double scale = 1.0 / std::sqrt(s.norm_integral());
        s.norm *= scale;
        s.exterior_coef *= scale;
        states.push_back(s);
      }
    }
    a_prev = a;
    g_prev = ga;
  }
  // a increases with eps, so the scan order is already ascending in energy.
  return states;
}

std::vector<TransverseState> bound_spectrum(const StringPotential& well, double total_energy,
                                            const SpectrumConfig& config) {
  std::vector<TransverseState> out;
  for (int m = 0; m <= config.max_m; ++m) {
    auto states = bound_states_exact(well, total_energy, m, config);
    out.insert(out.end(), states.begin(), states.end());
  }
  return out;
}

TransverseState quasi_bound_level_model(const StringPotential& well, double total_energy, int n, int m) {
  check_energy(total_energy);
  check_quantum_numbers(n, m);
  const double r = well.radius;
  const double eigen = kPi * kPi * n * n + static_cast<double>(m) * m;
  TransverseState s;
  s.m = m;
  s.n = n;
  s.kind = StateKind::QuasiBoundModel;
  s.effective_mass = total_energy;
  s.well_radius = r;
  s.energy = eigen / (2.0 * total_energy * r * r) - well.depth;
  s.k_in = std::sqrt(eigen) / r;
  return s;
}

TransverseState level_exact_infinite_well(const StringPotential& well, double total_energy, int n, int m) {
  check_energy(total_energy);
  check_quantum_numbers(n, m);
  const double r = well.radius;
  const double zero = bessel_j_zero(m, n);
  TransverseState s;
  s.m = m;
  s.n = n;
  s.kind = StateKind::LevelExactInfiniteWell;
  s.effective_mass = total_energy;
  s.well_radius = r;
  s.energy = zero * zero / (2.0 * total_energy * r * r) - well.depth;
  s.k_in = zero / r;
  return s;
}

LevelCount n_max(const StringPotential& well, double total_energy) {
  check_energy(total_energy);
  LevelCount c;
  c.value = well.well_strength(total_energy) / kPi;
  c.floor = static_cast<int>(std::floor(c.value));
  return c;
}

double single_state_threshold(const StringPotential& well) {
  if (!(well.depth > 0.0) || !(well.radius > 0.0)) {
    throw std::invalid_argument("threshold needs V0 > 0 and R > 0");
  }
  return kPi * kPi / (2.0 * well.depth * well.radius * well.radius);
}

double resonance_condition_residual(const BeamState& beam, const StringPotential& well, int n, int m) {
  return beam.transverse_energy() - quasi_bound_level_model(well, beam.total_energy, n, m).energy;
}

int threshold_bound_state_count(double well_strength, int m) {
  if (m < 0) throw std::invalid_argument("azimuthal number m must be >= 0");
  if (well_strength <= 0.0) return 0;
  if (m == 0) return 1 + bessel_j_zero_count(1, well_strength);
  return bessel_j_zero_count(m - 1, well_strength);
}

}  // namespace chanres
