// One PASS/FAIL line per acceptance criterion, with wall-clock runtimes.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "chanres/cli.hpp"
#include "chanres/errors.hpp"
#include "chanres/oracle.hpp"
#include "chanres/resonance.hpp"
#include "chanres/scattering.hpp"
#include "chanres/scenario.hpp"
#include "chanres/special_functions.hpp"
#include "chanres/spectrum.hpp"
#include "support/random_grid.hpp"

using namespace chanres;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_ms;  // <= 0: no runtime bound
  std::function<Outcome()> run;
};

bool within_rel(double value, double expected, double tol) {
  return std::abs(value - expected) <= tol * std::abs(expected);
}

bool within_factor(double value, double expected, double factor) {
  return value > 0.0 && value <= factor * expected && value >= expected / factor;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const Scenario kSi = preset_si111();

Outcome threshold() {
  const double t = single_state_threshold(kSi.potential());
  return {within_rel(t, 20.19e6, 5e-4) && within_rel(t, 20e6, 0.05), fmt("threshold %.6g eV", t)};
}

Outcome resonance_angle() {
  const double t = theta_res(kSi.potential(), kSi.beam.energy_ev, 1, 1);
  const double quoted = degrees_to_radians(0.1);
  return {within_rel(t, 1.2161e-3, 1e-4) && within_factor(t, quoted, 1.5), fmt("theta_res %.10g rad", t)};
}

Outcome width_ratio() {
  const StringPotential w = kSi.potential();
  const double ratio = gamma_angle(w, kSi.beam.energy_ev, 1, 1) / theta_res(w, kSi.beam.energy_ev, 1, 1);
  return {within_rel(ratio, 0.2034, 1e-4) && within_factor(ratio, 0.5, 3.0), fmt("Gamma/theta_res %.10g", ratio)};
}

Outcome round_trip() {
  const StringPotential w = kSi.potential();
  double worst = 0.0;
  int defined = 0;
  for (double e : {5e6, 10e6, 15e6, 19e6}) {
    for (const auto& [n, m] : {std::pair{1, 1}, std::pair{1, 2}}) {
      double t = 0.0;
      try {
        t = theta_res(w, e, n, m);
      } catch (const NoResonanceError&) {
        continue;
      }
      if (t == 0.0) continue;
      ++defined;
      worst = std::max(worst, std::abs(e_res(w, t, n, m) - e) / e);
    }
  }
  return {defined > 0 && worst <= 1e-9, fmt("worst relative error %.3g", worst) + " over " +
                                           std::to_string(defined) + " defined points"};
}

// Full width at half maximum of the central peak of excess(theta) >= 0,
// with linear interpolation at the crossing.
double central_fwhm(const std::vector<double>& theta, const std::vector<double>& excess) {
  const double half = 0.5 * excess.front();
  for (std::size_t i = 1; i < excess.size(); ++i) {
    if (excess[i] <= half) {
      const double t = (excess[i - 1] - half) / (excess[i - 1] - excess[i]);
      return 2.0 * (theta[i - 1] + t * (theta[i] - theta[i - 1]));
    }
  }
  return std::numeric_limits<double>::infinity();
}

Outcome central_peak() {
  const auto bound = small_angle_bound_profile(kSi);
  std::vector<double> theta;
  const double step = (kSi.scan.max - kSi.scan.min) / (kSi.scan.points - 1);
  for (int i = 0; i < kSi.scan.points; ++i) theta.push_back(degrees_to_radians(kSi.scan.min + i * step));
  const double fwhm = central_fwhm(theta, bound);
  const BeamState b = kSi.beam_state();
  const double theta_eff = 1.0 / std::sqrt(b.momentum * kSi.potential().length);
  return {within_factor(fwhm, theta_eff, 2.0),
          fmt("FWHM %.4g rad", fwhm) + fmt(" vs 1/sqrt(pL) %.4g rad", theta_eff) + fmt(" (ratio %.3g)", fwhm / theta_eff)};
}

Outcome two_peaks() {
  const auto r = run_angle_scan(kSi, resolve_thread_count(0));
  const auto& x = r.x;
  std::vector<double> maxima;
  const std::size_t n = r.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double s = r.points[i].total;
    const bool left = i == 0 || s > r.points[i - 1].total;
    const bool right = i + 1 == n || s > r.points[i + 1].total;
    if (left && right) maxima.push_back(x[i]);
  }
  const bool ok = maxima.size() == 2 && maxima[0] == 0.0 && maxima[1] > 0.02 && maxima[1] < 0.15;
  std::string detail = std::to_string(maxima.size()) + " maxima at";
  for (double m : maxima) detail += fmt(" %.4g deg", m);
  return {ok, detail};
}

Outcome spectrum_cross_check() {
  const StringPotential si = kSi.potential();
  const double e = kSi.beam.energy_ev;
  const double exact = bound_states_exact(si, e, 0).at(0).energy;
  const auto fd = fd_bound_states(si, e, 0, RadialMesh::for_well(si, 10000));
  bool ok = !fd.empty() && within_rel(fd[0].energy, exact, 1e-3);
  std::string detail = fmt("m=0 exact %.10g eV", exact) + fmt(" fd %.10g eV;", fd.empty() ? 0.0 : fd[0].energy);

  testing_support::Rng rng(2024);
  const double j01 = bessel_j_zero(0, 1);
  int wells = 0;
  while (wells < 5) {
    const double x0 = rng.uniform(1.0, 5.0);
    if (std::abs(x0 - j01) < 0.1) continue;
    ++wells;
    const double r = si.radius;
    const StringPotential w = StringPotential::make(x0 * x0 / (2.0 * e * r * r), r, si.length);
    const auto exact1 = bound_states_exact(w, e, 1);
    double extent = 20.0;
    for (const auto& s : exact1) extent = std::max(extent, 40.0 / (s.kappa_out * r));
    const auto fd1 = fd_bound_states(w, e, 1, RadialMesh::make(w, extent * r, static_cast<int>(500.0 * extent)));
    const bool expected = x0 > j01;
    const bool well_ok = (!exact1.empty() == expected) && (!fd1.empty() == expected);
    ok = ok && well_ok;
    detail += fmt(" x0=%.3f", x0) + (well_ok ? " ok" : " mismatch");
  }
  return {ok, detail};
}

Outcome optical_theorem() {
  const StringPotential w = kSi.potential();
  double worst = 0.0;
  double deficit = 0.0;
  for (double deg : {0.0, 0.1}) {
    const BeamState b = kSi.beam_state().with_angle(degrees_to_radians(deg));
    const ScatteringBasis basis = build_basis(b, w);
    const double sigma = sigma_total(b, w, basis).total;
    const double forward = 4.0 * kPi / b.momentum * amplitude_f(b, w, basis, b.entry_angle, 0.0).imag();
    worst = std::max(worst, std::abs(sigma - forward) / std::abs(sigma));
    if (deg == 0.0) deficit = parseval_audit(basis, b.transverse_momentum);
  }
  return {worst <= 1e-8 && deficit < 0.01, fmt("optical mismatch %.3g", worst) + fmt(", Parseval deficit %.3g", deficit)};
}

Outcome breit_wigner() {
  const StringPotential w = kSi.potential();
  const double e = kSi.beam.energy_ev;
  const double t = theta_res(w, e, 1, 1);
  const double g = gamma_angle(w, e, 1, 1);
  const BeamState at_peak = kSi.beam_state().with_angle(t);
  const double sigma0 = sigma_continuum_baseline(at_peak, w);
  const double excess = sigma_bw_angle(at_peak, w, 1, 1) - sigma0;
  const double expected = 2.0 / kPi * w.length / at_peak.momentum;
  const bool peak_ok = sigma_peak_excess(at_peak, w) == expected && std::abs(excess - expected) <= 1e-15 * expected;
  const double peak = expected;
  const double hi = breit_wigner_excess(t + 0.5 * g, t, g, peak);
  const double lo = breit_wigner_excess(t - 0.5 * g, t, g, peak);
  const bool half_ok = std::abs(hi / peak - 0.5) <= 1e-9 && std::abs(lo / peak - 0.5) <= 1e-9;
  // Offsets on the ulp grid of theta_res keep t +- d exact, so the two sides
  // see bit-identical distances.
  const double ulp = std::nextafter(t, 1.0) - t;
  bool symmetric = true;
  for (double f : {0.0, 0.125, 0.5, 1.0, 2.0}) {
    const double d = std::round(f * g / ulp) * ulp;
    symmetric = symmetric && breit_wigner_excess(t + d, t, g, peak) == breit_wigner_excess(t - d, t, g, peak);
  }
  return {peak_ok && half_ok && symmetric, fmt("peak excess %.6g eV^-2", excess) + fmt(", half-max ratio %.12f", hi / peak)};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  std::vector<std::string> outputs;
  for (int workers : {1, 2, 8}) {
    const auto path = std::filesystem::temp_directory_path() / ("chanres_fig2_" + std::to_string(workers) + ".csv");
    std::ostringstream out, err;
    if (run_cli({"--threads", std::to_string(workers), "fig2", "--out", path.string()}, out, err) != 0) {
      return {false, "fig2 failed: " + err.str()};
    }
    outputs.push_back(read_file(path));
    std::filesystem::remove(path);
  }
  const bool same = !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2];
  return {same, std::to_string(outputs[0].size()) + " bytes per run"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "single-state threshold", 1.0, threshold},
      {2, "resonance angle", 0.0, resonance_angle},
      {3, "width ratio", 0.0, width_ratio},
      {4, "energy/angle round trip", 10.0, round_trip},
      {5, "central peak width", 5000.0, central_peak},
      {6, "two-peak structure", 5000.0, two_peaks},
      {7, "spectrum cross-validation", 30000.0, spectrum_cross_check},
      {8, "optical theorem and completeness", 30000.0, optical_theorem},
      {9, "Breit-Wigner identities", 10.0, breit_wigner},
      {10, "determinism", 0.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.budget_ms <= 0.0 || ms < c.budget_ms;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s criterion %d (%s): %s; %.3f ms%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), ms, in_time ? "" : " (over budget)");
  }
  return failed;
}
