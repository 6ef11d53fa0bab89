#include "chanres/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

#include "chanres/errors.hpp"
#include "chanres/quadrature.hpp"
#include "chanres/special_functions.hpp"

namespace chanres {
namespace {

constexpr double kParsevalLimit = 0.05;

// Neumaier-compensated running sum; order of additions is fixed by the caller.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

double degeneracy(int m) { return m == 0 ? 1.0 : 2.0; }

double j_lower(int m, double x) { return m == 0 ? -bessel_j(1, x) : bessel_j(m - 1, x); }

double sinc(double y) {
  if (std::abs(y) < 1e-4) return 1.0 - y * y / 6.0;
  return std::sin(y) / y;
}

// Values at the well edge entering the Wronskian-type boundary terms.
struct EdgeData {
  double u = 0.0;   // R(R)
  double du = 0.0;  // R'(R)
  double v = 0.0;   // J_m(p R)
  double dv = 0.0;  // p J_m'(p R)
  double w = 0.0;   // R [u v' - u' v]
};

EdgeData edge_data(const TransverseState& s, double p) {
  EdgeData e;
  const double r = s.well_radius;
  const double a = s.k_in * r;
  e.u = s.norm * bessel_j(s.m, a);
  e.du = s.norm * s.k_in * bessel_j_prime(s.m, a);
  e.v = bessel_j(s.m, p * r);
  e.dv = p * bessel_j_prime(s.m, p * r);
  e.w = r * (e.u * e.dv - e.du * e.v);
  return e;
}

bool near_degenerate(double k2, double p2) { return std::abs(k2 - p2) <= 1e-7 * std::max(k2, p2); }

double interior_overlap(const TransverseState& s, double p, const EdgeData& e) {
  const double k2 = s.k_in * s.k_in;
  const double p2 = p * p;
  if (!near_degenerate(k2, p2)) return e.w / (k2 - p2);
  const double r = s.well_radius;
  if (k2 == p2) {
    const double a = s.k_in * r;
    return s.norm / k2 * 0.5 * a * a *
           (bessel_j(s.m, a) * bessel_j(s.m, a) - j_lower(s.m, a) * bessel_j(s.m + 1, a));
  }
  auto f = [&](double rho) { return s.norm * bessel_j(s.m, s.k_in * rho) * bessel_j(s.m, p * rho) * rho; };
  return integrate_adaptive(f, 0.0, r, 0.0, 1e-13).value;
}

// Boundary term at the Dirichlet wall: D [u v' - u' v] with u(D) = 0.
double wall_term(const TransverseState& s, double p) {
  const double d = s.box_radius;
  const double x = s.k_out * d;
  const double lower = s.m == 0 ? -(std::cos(s.phase_shift) * bessel_j(1, x) - std::sin(s.phase_shift) * bessel_y(1, x))
                                : std::cos(s.phase_shift) * bessel_j(s.m - 1, x) -
                                      std::sin(s.phase_shift) * bessel_y(s.m - 1, x);
  const double upper =
      std::cos(s.phase_shift) * bessel_j(s.m + 1, x) - std::sin(s.phase_shift) * bessel_y(s.m + 1, x);
  const double du = s.exterior_coef * s.k_out * 0.5 * (lower - upper);
  return -d * du * bessel_j(s.m, p * d);
}

// Numerator P of the continuum interaction overlap P / (k^2 - p^2).
double continuum_interaction_numerator(const TransverseState& s, double p, const EdgeData& e) {
  const double k2 = s.k_out * s.k_out;
  const double kin2 = s.k_in * s.k_in;
  const double p2 = p * p;
  if (!near_degenerate(kin2, p2)) {
    return -(kin2 - k2) * e.w / (kin2 - p2);
  }
  return interior_overlap(s, p, e) * (k2 - p2) - e.w;
}

void require_wavefunction(const TransverseState& s) {
  if (!s.has_wavefunction()) throw std::invalid_argument("state carries no normalised wavefunction");
}

std::complex<double> angular_factor(int m, double azimuth) {
  // 2 pi i^m exp(i m phi)
  static const std::complex<double> powers[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  return 2.0 * kPi * powers[m % 4] * std::polar(1.0, m * azimuth);
}

double disk_channel_norm(int m, double p, double d) {
  if (p == 0.0) return m == 0 ? 0.5 * d * d : 0.0;
  const double x = p * d;
  const double jm = bessel_j(m, x);
  return 0.5 * d * d * (jm * jm - j_lower(m, x) * bessel_j(m + 1, x));
}

}  // namespace

std::size_t ScatteringBasis::bound_count() const {
  return static_cast<std::size_t>(std::count_if(states.begin(), states.end(),
                                                [](const TransverseState& s) { return s.kind == StateKind::BoundExact; }));
}

std::size_t ScatteringBasis::continuum_count() const { return states.size() - bound_count(); }

int auto_partial_wave_limit(double transverse_momentum, double radius) {
  const double x = std::abs(transverse_momentum) * radius;
  if (x == 0.0) return 0;
  return static_cast<int>(std::ceil(x + 4.0 * std::cbrt(x) + 8.0));
}

std::vector<TransverseState> continuum_states(const StringPotential& well, double total_energy, int m,
                                              double disk_radius, double momentum_cutoff, int max_states,
                                              int oversampling) {
  if (m < 0) throw std::invalid_argument("azimuthal number m must be >= 0");
  if (!(disk_radius > well.radius)) throw std::invalid_argument("disk radius must exceed the well radius");
  if (!(momentum_cutoff > 0.0) || max_states < 1) throw std::invalid_argument("empty continuum request");
  const double r = well.radius;
  const double d = disk_radius;
  const double k_well2 = 2.0 * total_energy * well.depth;

  // Exterior phase from matching: tan(d) = num / den.
  struct Phase {
    double c = 1.0, s = 0.0;  // cos(d), sin(d) up to a common positive factor
  };
  auto phase_at = [&](double k) {
    const double kin = std::sqrt(k * k + k_well2);
    const double a = kin * r;
    const double x = k * r;
    const double ja = bessel_j(m, a);
    const double dja = m * ja - a * bessel_j(m + 1, a);  // a J_m'(a)
    const double jx = bessel_j(m, x);
    const double yx = bessel_y(m, x);
    const double djx = m * jx - x * bessel_j(m + 1, x);
    const double dyx = m * yx - x * bessel_y(m + 1, x);
    const double num = djx * ja - dja * jx;
    const double den = dyx * ja - dja * yx;
    const double h = std::hypot(num, den);
    return Phase{den / h, num / h};
  };
  auto quantisation = [&](double k) {
    const Phase ph = phase_at(k);
    return ph.c * bessel_j(m, k * d) - ph.s * bessel_y(m, k * d);
  };

  std::vector<TransverseState> states;
  const double step = kPi / (d * std::max(oversampling, 2));
  double k_prev = step;
  double g_prev = quantisation(k_prev);
  for (int i = 2; static_cast<int>(states.size()) < max_states; ++i) {
    const double k = step * i;
    if (k > momentum_cutoff) break;
    const double gk = quantisation(k);
    if (g_prev == 0.0 || (g_prev < 0.0) != (gk < 0.0)) {
      const double root = g_prev == 0.0 ? k_prev
                                        : find_root(quantisation, RootBracket{k_prev, k, g_prev, gk}, 1e-13 * k);
      TransverseState s;
      s.m = m;
      s.n = static_cast<int>(states.size()) + 1;
      s.kind = StateKind::ContinuumBox;
      s.effective_mass = total_energy;
      s.well_radius = r;
      s.box_radius = d;
      s.k_out = root;
      s.k_in = std::sqrt(root * root + k_well2);
      s.energy = root * root / (2.0 * total_energy);
      const Phase ph = phase_at(root);
      double delta = std::atan2(ph.s, ph.c);
      if (delta > 0.5 * kPi) delta -= kPi;
      if (delta <= -0.5 * kPi) delta += kPi;
      s.phase_shift = delta;
      // Continuity at R with unit exterior coefficient.
      const double a = s.k_in * r;
      const double x = root * r;
      const double ja = bessel_j(m, a);
      const double jpa = bessel_j_prime(m, a);
      const double c = std::cos(delta) * bessel_j(m, x) - std::sin(delta) * bessel_y(m, x);
      const double cp = std::cos(delta) * bessel_j_prime(m, x) - std::sin(delta) * bessel_y_prime(m, x);
      s.exterior_coef = 1.0;
      s.norm = std::abs(ja) >= std::abs(jpa) ? c / ja : root * cp / (s.k_in * jpa);
      const double scale = 1.0 / std::sqrt(s.norm_integral());
      s.norm *= scale;
      s.exterior_coef *= scale;
      states.push_back(s);
    }
    k_prev = k;
    g_prev = gk;
  }
  return states;
}

ScatteringBasis build_basis(const BeamState& beam, const StringPotential& well, const BasisConfig& config) {
  ScatteringBasis basis;
  const double rho_eff = well.length > 0.0 && beam.momentum > 0.0 ? std::sqrt(well.length / beam.momentum) : 0.0;
  basis.disk_radius = std::max(config.disk_radius_factor * rho_eff, config.min_disk_radius_factor * well.radius);
  basis.momentum_cutoff = config.cutoff_factor / well.radius;
  basis.max_m = config.max_m >= 0 ? config.max_m : auto_partial_wave_limit(beam.transverse_momentum, well.radius);

  auto channel = [&](int m) {
    auto states = bound_states_exact(well, beam.total_energy, m, config.spectrum);
    auto cont = continuum_states(well, beam.total_energy, m, basis.disk_radius, basis.momentum_cutoff,
                                 config.max_states_per_m, config.scan_oversampling);
    states.insert(states.end(), cont.begin(), cont.end());
    return states;
  };
  std::vector<std::future<std::vector<TransverseState>>> jobs;
  for (int m = 0; m <= basis.max_m; ++m) jobs.push_back(std::async(std::launch::async, channel, m));
  for (auto& job : jobs) {
    auto states = job.get();
    basis.states.insert(basis.states.end(), states.begin(), states.end());
  }
  return basis;
}

double overlap_radial(const TransverseState& state, double p_perp) {
  require_wavefunction(state);
  if (p_perp < 0.0) throw std::invalid_argument("transverse momentum must be >= 0");
  const EdgeData e = edge_data(state, p_perp);
  const double interior = interior_overlap(state, p_perp, e);
  if (state.kind == StateKind::BoundExact) {
    return interior + e.w / (state.kappa_out * state.kappa_out + p_perp * p_perp);
  }
  const double k2 = state.k_out * state.k_out;
  const double p2 = p_perp * p_perp;
  if (near_degenerate(k2, p2)) {
    auto f = [&](double rho) { return state.radial(rho) * bessel_j(state.m, p_perp * rho) * rho; };
    return interior + integrate_adaptive(f, state.well_radius, state.box_radius, 0.0, 1e-12, 20000).value;
  }
  return interior + (wall_term(state, p_perp) - e.w) / (k2 - p2);
}

double overlap_radial_quadrature(const TransverseState& state, double p_perp) {
  require_wavefunction(state);
  auto f = [&](double rho) { return state.radial(rho) * bessel_j(state.m, p_perp * rho) * rho; };
  const double r = state.well_radius;
  double total = integrate_adaptive(f, 0.0, r, 0.0, 1e-13).value;
  if (state.kind == StateKind::BoundExact) {
    // Exterior in e-folding slabs until the tail is negligible.
    const double slab = 1.0 / state.kappa_out;
    double lo = r;
    for (int i = 0; i < 60; ++i) {
      const double piece = integrate_adaptive(f, lo, lo + slab, 1e-300, 1e-13).value;
      total += piece;
      lo += slab;
      if (i > 5 && std::abs(piece) < 1e-17 * std::abs(total)) break;
    }
    return total;
  }
  const double d = state.box_radius;
  const double period = kPi / std::max(state.k_out, p_perp > 0.0 ? p_perp : state.k_out);
  const int pieces = std::max(1, static_cast<int>(std::ceil((d - r) / (8.0 * period))));
  for (int i = 0; i < pieces; ++i) {
    const double lo = r + (d - r) * i / pieces;
    const double hi = r + (d - r) * (i + 1) / pieces;
    total += integrate_adaptive(f, lo, hi, 0.0, 1e-12).value;
  }
  return total;
}

double interaction_radial(const TransverseState& state, double p_perp) {
  require_wavefunction(state);
  if (p_perp < 0.0) throw std::invalid_argument("transverse momentum must be >= 0");
  if (state.kind == StateKind::BoundExact) return overlap_radial(state, p_perp);
  const EdgeData e = edge_data(state, p_perp);
  return continuum_interaction_numerator(state, p_perp, e) / (state.k_out * state.k_out - p_perp * p_perp);
}

std::complex<double> overlap_Q(const TransverseState& state, double p_perp, double azimuth) {
  return angular_factor(state.m, azimuth) * overlap_radial(state, p_perp);
}

TransitionAmplitude transition_amplitude(const TransverseState& state, double p_perp, double azimuth) {
  return TransitionAmplitude{state, p_perp, azimuth, overlap_Q(state, p_perp, azimuth)};
}

double completeness_fraction(const ScatteringBasis& basis, double p_perp) {
  CompensatedSum captured;
  for (const auto& s : basis.states) {
    const double i = overlap_radial(s, p_perp);
    captured.add(degeneracy(s.m) * 2.0 * kPi * i * i);
  }
  CompensatedSum norm;
  for (int m = 0; m <= basis.max_m; ++m) norm.add(degeneracy(m) * disk_channel_norm(m, p_perp, basis.disk_radius));
  if (!(norm.value() > 0.0)) throw std::invalid_argument("incident wave has no weight in the basis channels");
  return captured.value() / norm.value();
}

std::complex<double> amplitude_f(const BeamState& beam, const StringPotential& well, const ScatteringBasis& basis,
                                 double theta, double phi) {
  if (basis.states.empty()) throw std::invalid_argument("empty basis");
  const double p = beam.momentum;
  const double p_i = beam.transverse_momentum;
  const double p_f = p * theta;
  const double eps_i = beam.transverse_energy();
  const std::complex<double> i_unit(0.0, 1.0);
  std::complex<double> sum(0.0, 0.0);
  for (const auto& s : basis.states) {
    const double weight = s.m == 0 ? 1.0 : 2.0 * std::cos(s.m * phi);
    const double qi = interaction_radial(s, p_i);
    const double qf = interaction_radial(s, p_f);
    const double phase = (s.energy - eps_i) * well.length;
    sum += weight * qi * qf * (std::exp(i_unit * phase) - 1.0);
  }
  return p / (2.0 * kPi * i_unit) * sum;
}

CrossSectionBreakdown sigma_total(const BeamState& beam, const StringPotential& well, const ScatteringBasis& basis) {
  if (basis.states.empty()) throw std::invalid_argument("empty basis");
  const double deficit = 1.0 - completeness_fraction(basis, beam.transverse_momentum);
  if (deficit > kParsevalLimit) {
    throw AccuracyError("basis misses " + std::to_string(100.0 * deficit) + "% of the incident wave");
  }
  return state_sum_sigma(beam, well, basis);
}

CrossSectionBreakdown state_sum_sigma(const BeamState& beam, const StringPotential& well,
                                      const ScatteringBasis& basis) {
  const double p = beam.transverse_momentum;
  const double e_total = beam.total_energy;
  const double eps_i = beam.transverse_energy();
  const double r2 = well.radius * well.radius;
  CrossSectionBreakdown out;
  CompensatedSum total, bound, continuum, resonance;
  out.per_state.reserve(basis.states.size());
  for (const auto& s : basis.states) {
    double c = 0.0;
    if (s.kind == StateKind::BoundExact) {
      const double q = overlap_radial(s, p);
      const double half_phase = 0.5 * (s.energy - eps_i) * well.length;
      c = 4.0 * degeneracy(s.m) * q * q * std::sin(half_phase) * std::sin(half_phase);
      bound.add(c);
    } else {
      // sin(Phi/2) / (k^2 - p^2) = (L / 4E) sinc((k^2 - p^2) L / 4E)
      const EdgeData e = edge_data(s, p);
      const double num = continuum_interaction_numerator(s, p, e);
      const double scale = well.length / (4.0 * e_total);
      const double y = (s.k_out * s.k_out - p * p) * scale;
      const double amp = num * scale * sinc(y);
      c = 4.0 * degeneracy(s.m) * amp * amp;
      const bool trapped = s.m >= 1 && s.energy > 0.0 && s.energy < s.m * s.m / (2.0 * e_total * r2);
      (trapped ? resonance : continuum).add(c);
    }
    total.add(c);
    out.per_state.push_back(StateContribution{s.n, s.m, s.kind, s.energy, c});
  }
  out.total = total.value();
  out.bound = bound.value();
  out.continuum = continuum.value();
  out.resonance = resonance.value();
  return out;
}

double sigma_continuum_baseline(const BeamState& beam, const StringPotential& well) {
  if (!(beam.momentum > 0.0)) throw std::invalid_argument("momentum must be positive");
  return 2.0 / kPi * well.length / beam.momentum;
}

CrossSectionBreakdown sigma_small_angle_m0(const BeamState& beam, const StringPotential& well,
                                           std::span<const TransverseState> m0_bound_states) {
  CrossSectionBreakdown out;
  const double p = beam.momentum;
  out.continuum = sigma_continuum_baseline(beam, well);
  const double shift = beam.transverse_momentum * beam.transverse_momentum / (2.0 * p);
  CompensatedSum bound;
  for (const auto& s : m0_bound_states) {
    if (s.m != 0 || !(s.energy < 0.0)) continue;
    const double binding = std::abs(s.energy);
    const double delta = binding + shift;
    const double sn = std::sin(0.5 * delta * well.length);
    const double c = 2.0 / kPi * (binding / p) * sn * sn / (delta * delta);
    bound.add(c);
    out.per_state.push_back(StateContribution{s.n, 0, s.kind, s.energy, c});
  }
  out.bound = bound.value();
  out.total = out.continuum + out.bound;
  out.outside_regime = beam.entry_angle * std::sqrt(p * well.length) > 1.0;
  return out;
}

CrossSectionBreakdown sigma_small_angle_m0(const BeamState& beam, const StringPotential& well,
                                           const SpectrumConfig& config) {
  const auto states = bound_states_exact(well, beam.total_energy, 0, config);
  return sigma_small_angle_m0(beam, well, states);
}

}  // namespace chanres
