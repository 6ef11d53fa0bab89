#include "chanres/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "chanres/errors.hpp"
#include "chanres/oracle.hpp"
#include "chanres/resonance.hpp"
#include "chanres/scattering.hpp"
#include "chanres/scenario.hpp"
#include "chanres/spectrum.hpp"

namespace chanres {
namespace {

struct Options {
  std::string config;
  std::string out;
  bool printed_form = false;
  bool ultrarelativistic = false;
  std::string level_variant;
  int threads = 0;
  std::optional<int> mesh_points;
  std::optional<double> mesh_extent;
  int n = 1;
  int m = 1;
};

Scenario build_scenario(const Options& o, Scenario base, bool allow_config) {
  Scenario s = std::move(base);
  if (!o.config.empty()) {
    if (!allow_config) throw ConfigError("this command runs the built-in preset; use angle-scan --config instead");
    s = load_config(o.config, s);
  }
  if (o.printed_form) s.model.printed_e_res = true;
  if (o.ultrarelativistic) s.model.ultrarelativistic = true;
  if (!o.level_variant.empty()) s.model.level_variant = parse_level_variant(o.level_variant);
  if (o.mesh_points) s.oracle.mesh_points = *o.mesh_points;
  if (o.mesh_extent) s.oracle.mesh_extent = *o.mesh_extent;
  s.validate();
  return s;
}

void write_text(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + o.out + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing '" + o.out + "'");
}

void write_scan(const Options& o, const ScanResult& result, std::ostream& out) {
  if (o.out.empty()) {
    emit_csv(result, out);
  } else {
    emit_csv(result, o.out);
  }
}

std::string cmd_spectrum(const Scenario& s) {
  const StringPotential well = s.potential();
  const double e = s.beam.energy_ev;
  std::ostringstream t;
  t << "# scenario: " << s.name << "\n";
  t << "# E_ev=" << format_number(e) << " V0_ev=" << format_number(well.depth)
    << " x0=" << format_number(well.well_strength(e)) << " n_max=" << format_number(n_max(well, e).value) << "\n";
  t << "kind,n,m,energy_ev\n";
  for (const auto& st : bound_spectrum(well, e)) {
    t << to_string(st.kind) << ',' << st.n << ',' << st.m << ',' << format_number(st.energy) << '\n';
  }
  for (int m = 0; m <= 4; ++m) {
    for (int n = 1; n <= 2; ++n) {
      const auto a = quasi_bound_level_model(well, e, n, m);
      t << to_string(a.kind) << ',' << n << ',' << m << ',' << format_number(a.energy) << '\n';
    }
  }
  for (int m = 0; m <= 4; ++m) {
    for (int n = 1; n <= 2; ++n) {
      const auto b = level_exact_infinite_well(well, e, n, m);
      t << to_string(b.kind) << ',' << n << ',' << m << ',' << format_number(b.energy) << '\n';
    }
  }
  return t.str();
}

std::string cmd_threshold(const Scenario& s) {
  const StringPotential well = s.potential();
  const BeamState beam = s.beam_state();
  const double threshold = single_state_threshold(well);
  const RegimeReport regime = regime_check(beam, well);
  const EffectiveScales scales = effective_scales(beam, well);
  std::ostringstream t;
  t << "single_state_threshold_ev = " << format_number(threshold) << "\n";
  t << "single_state_threshold_mev = " << format_number(threshold / 1e6) << "\n";
  t << "beam_energy_ev = " << format_number(beam.total_energy) << "\n";
  t << "below_threshold = " << (beam.total_energy < threshold ? "true" : "false") << "\n";
  t << "n_max = " << format_number(n_max(well, beam.total_energy).value) << "\n";
  t << "well_strength_x0 = " << format_number(well.well_strength(beam.total_energy)) << "\n";
  t << "theta_eff_rad = " << format_number(scales.theta_eff) << "\n";
  t << "rho_eff = " << format_number(scales.rho_eff) << "\n";
  t << "q_parallel = " << format_number(scales.q_parallel) << "\n";
  for (const auto* c : {&regime.long_string, &regime.fast_particle, &regime.slow_transverse}) {
    t << "regime " << c->name << " = " << format_number(c->value) << " (threshold " << format_number(c->threshold)
      << ") " << (c->pass ? "pass" : "fail") << "\n";
  }
  return t.str();
}

std::string cmd_resonance(const Scenario& s, int n, int m) {
  const StringPotential well = s.potential();
  const BeamState beam = s.beam_state();
  std::ostringstream t;
  t << "n = " << n << "\nm = " << m << "\nlevel_variant = " << to_string(s.model.level_variant) << "\n";
  if (s.model.level_variant == LevelVariant::ExactMatching) {
    Scenario probe = s;
    probe.scan = ScanSpec{ScanKind::Angle, 0.0, 90.0, 2};
    probe.model.resonances = std::to_string(n) + ":" + std::to_string(m);
    const auto found = scan_resonances(probe);
    if (found.empty()) throw NoResonanceError("no phase-shift resonance for this partial wave");
    t << "theta_res_rad = " << format_number(found[0].position) << "\n";
    t << "theta_res_deg = " << format_number(radians_to_degrees(found[0].position)) << "\n";
    t << "gamma_rad = " << format_number(found[0].width) << "\n";
    t << "gamma_over_theta = " << format_number(found[0].width / found[0].position) << "\n";
    return t.str();
  }
  const auto r = predict_resonance(beam, well, n, m, s.model.level_variant, s.model.printed_e_res);
  t << "theta_res_rad = " << format_number(r.theta_res) << "\n";
  t << "theta_res_deg = " << format_number(radians_to_degrees(r.theta_res)) << "\n";
  t << "gamma_rad = " << format_number(r.gamma) << "\n";
  t << "gamma_over_theta = " << format_number(r.theta_res > 0.0 ? r.gamma / r.theta_res : 1.0) << "\n";
  t << "entry_angle_deg = " << format_number(s.beam.angle_deg) << "\n";
  t << "e_res_ev = " << format_number(r.e_res) << "\n";
  t << "gamma_bar_ev = " << format_number(r.gamma_bar) << "\n";
  t << "sigma_peak_excess = " << format_number(r.sigma_peak_excess) << "\n";
  t << "printed_e_res = " << (s.model.printed_e_res ? "true" : "false") << "\n";
  return t.str();
}

std::string cmd_validate(const Scenario& s) {
  const StringPotential well = s.potential();
  const BeamState beam = s.beam_state().with_angle(0.0);
  const double e = beam.total_energy;
  const RadialMesh mesh = RadialMesh::make(well, s.oracle.mesh_extent * well.radius, s.oracle.mesh_points);
  std::ostringstream t;
  t << "# mesh rho_max=" << format_number(mesh.rho_max) << " points=" << mesh.points << "\n";
  for (int m = 0; m <= 2; ++m) {
    const auto exact = bound_states_exact(well, e, m);
    const auto fd = fd_bound_states(well, e, m, mesh);
    if (exact.size() != fd.size()) {
      throw AccuracyError("bound-state count differs between solvers for m = " + std::to_string(m));
    }
    for (std::size_t i = 0; i < exact.size(); ++i) {
      const double rel = std::abs(fd[i].energy - exact[i].energy) / std::abs(exact[i].energy);
      t << "spectrum m=" << m << " n=" << exact[i].n << " exact_ev=" << format_number(exact[i].energy)
        << " fd_ev=" << format_number(fd[i].energy) << " rel=" << format_number(rel) << "\n";
      if (rel > 1e-3) throw AccuracyError("finite-difference level disagrees by " + format_number(rel));
    }
    if (exact.empty()) t << "spectrum m=" << m << " no bound state\n";
  }
  for (int m = 1; m <= 3; ++m) {
    const auto curve = phase_shift_curve(well, e, m, linear_energy_grid(0.0025, 40.0, 16000));
    const auto r = resonance_from_phase(curve);
    t << "phase m=" << m << " window_ev=(0,40] model_level_ev="
      << format_number(quasi_bound_level_model(well, e, 1, m).energy);
    if (r) {
      t << " resonance_ev=" << format_number(r->energy) << " width_ev=" << format_number(r->width) << "\n";
    } else {
      t << " resonance=none\n";
    }
  }
  const ScatteringBasis basis = build_basis(beam, well);
  const double deficit = parseval_audit(basis, 0.0);
  t << "parseval theta0=0 states=" << basis.states.size() << " deficit=" << format_number(deficit) << "\n";
  if (deficit > 0.01) throw AccuracyError("Parseval deficit " + format_number(deficit) + " exceeds 0.01");
  const double sigma = sigma_total(beam, well, basis).total;
  const double optical = 4.0 * kPi / beam.momentum * amplitude_f(beam, well, basis, 0.0, 0.0).imag();
  const double rel = std::abs(optical - sigma) / sigma;
  t << "optical_theorem sigma=" << format_number(sigma) << " four_pi_over_p_im_f=" << format_number(optical)
    << " rel=" << format_number(rel) << "\n";
  if (rel > 1e-8) throw AccuracyError("optical theorem mismatch " + format_number(rel));
  t << "validate: ok\n";
  return t.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Channeling resonance calculator for a cylindrical string potential", "chanres"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config, "Scenario file with 'section.key = value' lines");
  app.add_option("--out", o.out, "Write output here instead of stdout");
  app.add_flag("--paper-literal", o.printed_form, "Use the alternative closed form for the resonance energy");
  app.add_flag("--ultrarelativistic", o.ultrarelativistic, "Set p = E");
  app.add_option("--level-variant", o.level_variant, "model, exact-zero or exact-matching")
      ->check(CLI::IsMember({"model", "exact-zero", "exact-matching"}));
  app.add_option("--threads", o.threads, "Scan workers (default: STRING_RESONANCE_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--mesh-points", o.mesh_points, "Oracle mesh points");
  app.add_option("--mesh-extent", o.mesh_extent, "Oracle mesh extent in units of R");

  auto* spectrum = app.add_subcommand("spectrum", "Bound states and model levels");
  auto* threshold = app.add_subcommand("threshold", "Single-state threshold and regime checks");
  auto* resonance = app.add_subcommand("resonance", "Resonance angle, width and energy of one level");
  resonance->add_option("--n", o.n, "Radial quantum number")->check(CLI::PositiveNumber);
  resonance->add_option("--m", o.m, "Azimuthal quantum number")->check(CLI::NonNegativeNumber);
  auto* angle_scan = app.add_subcommand("angle-scan", "Cross section versus entry angle (CSV)");
  auto* energy_scan = app.add_subcommand("energy-scan", "Cross section versus energy at fixed angle (CSV)");
  auto* fig2 = app.add_subcommand("fig2", "Si <111> preset angle scan (CSV)");
  auto* validate = app.add_subcommand("validate", "Oracle cross-checks");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const int threads = resolve_thread_count(o.threads);
    if (*spectrum) {
      write_text(o, cmd_spectrum(build_scenario(o, preset_si111(), true)), out);
    } else if (*threshold) {
      write_text(o, cmd_threshold(build_scenario(o, preset_si111(), true)), out);
    } else if (*resonance) {
      write_text(o, cmd_resonance(build_scenario(o, preset_si111(), true), o.n, o.m), out);
    } else if (*angle_scan) {
      const Scenario s = build_scenario(o, preset_si111(), true);
      if (s.scan.kind != ScanKind::Angle) throw ConfigError("angle-scan needs scan.kind = angle");
      write_scan(o, run_angle_scan(s, threads), out);
    } else if (*energy_scan) {
      const Scenario s = build_scenario(o, preset_si111_energy(), true);
      if (s.scan.kind != ScanKind::Energy) throw ConfigError("energy-scan needs scan.kind = energy");
      write_scan(o, run_energy_scan(s, threads), out);
    } else if (*fig2) {
      write_scan(o, run_angle_scan(build_scenario(o, preset_si111(), false), threads), out);
    } else if (*validate) {
      write_text(o, cmd_validate(build_scenario(o, preset_si111(), true)), out);
    }
  } catch (const AccuracyError& e) {
    err << "accuracy failure: " << e.what() << "\n";
    return 3;
  } catch (const BracketError& e) {
    err << "accuracy failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace chanres
