#include "chanres/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "chanres/errors.hpp"
#include "chanres/oracle.hpp"
#include "chanres/spectrum.hpp"

#ifndef CHANRES_VERSION
#define CHANRES_VERSION "unknown"
#endif

namespace chanres {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError("'" + std::string(key) + "' expects a number, got '" + std::string(text) + "'");
  }
  return v;
}

int parse_int(std::string_view key, std::string_view text) {
  int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("'" + std::string(key) + "' expects an integer, got '" + std::string(text) + "'");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ConfigError("'" + std::string(key) + "' expects true or false, got '" + std::string(text) + "'");
}

struct Field {
  std::function<void(Scenario&, std::string_view)> set;
  std::function<std::string(const Scenario&)> get;
};

template <typename Section>
Field real(Section Scenario::*section, double Section::*member, const char* key) {
  return Field{[=](Scenario& s, std::string_view v) { s.*section.*member = parse_double(key, v); },
               [=](const Scenario& s) { return shortest(s.*section.*member); }};
}

template <typename Section>
Field integer(Section Scenario::*section, int Section::*member, const char* key) {
  return Field{[=](Scenario& s, std::string_view v) { s.*section.*member = parse_int(key, v); },
               [=](const Scenario& s) { return std::to_string(s.*section.*member); }};
}

template <typename Section>
Field boolean(Section Scenario::*section, bool Section::*member, const char* key) {
  return Field{[=](Scenario& s, std::string_view v) { s.*section.*member = parse_bool(key, v); },
               [=](const Scenario& s) { return std::string(s.*section.*member ? "true" : "false"); }};
}

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = {
      {"scenario.name", Field{[](Scenario& s, std::string_view v) { s.name = std::string(v); },
                              [](const Scenario& s) { return s.name; }}},
      {"beam.energy_ev", real(&Scenario::beam, &BeamSpec::energy_ev, "beam.energy_ev")},
      {"beam.mass_ev", real(&Scenario::beam, &BeamSpec::mass_ev, "beam.mass_ev")},
      {"beam.angle_deg", real(&Scenario::beam, &BeamSpec::angle_deg, "beam.angle_deg")},
      {"well.depth_ev", real(&Scenario::well, &WellSpec::depth_ev, "well.depth_ev")},
      {"well.inverse_radius_ev", real(&Scenario::well, &WellSpec::inverse_radius_ev, "well.inverse_radius_ev")},
      {"well.length_m", real(&Scenario::well, &WellSpec::length_m, "well.length_m")},
      {"scan.kind",
       Field{[](Scenario& s, std::string_view v) {
               if (v == "angle") {
                 s.scan.kind = ScanKind::Angle;
               } else if (v == "energy") {
                 s.scan.kind = ScanKind::Energy;
               } else {
                 throw ConfigError("'scan.kind' expects angle or energy, got '" + std::string(v) + "'");
               }
             },
             [](const Scenario& s) { return std::string(s.scan.kind == ScanKind::Angle ? "angle" : "energy"); }}},
      {"scan.min", real(&Scenario::scan, &ScanSpec::min, "scan.min")},
      {"scan.max", real(&Scenario::scan, &ScanSpec::max, "scan.max")},
      {"scan.points", integer(&Scenario::scan, &ScanSpec::points, "scan.points")},
      {"model.ultrarelativistic", boolean(&Scenario::model, &ModelSpec::ultrarelativistic, "model.ultrarelativistic")},
      {"model.printed_e_res",
       boolean(&Scenario::model, &ModelSpec::printed_e_res, "model.printed_e_res")},
      {"model.level_variant",
       Field{[](Scenario& s, std::string_view v) {
               try {
                 s.model.level_variant = parse_level_variant(v);
               } catch (const std::invalid_argument& e) {
                 throw ConfigError(e.what());
               }
             },
             [](const Scenario& s) { return std::string(to_string(s.model.level_variant)); }}},
      {"model.resonances", Field{[](Scenario& s, std::string_view v) {
                                   if (v != "auto") parse_level_list(v);
                                   s.model.resonances = std::string(v);
                                 },
                                 [](const Scenario& s) { return s.model.resonances; }}},
      {"oracle.mesh_points", integer(&Scenario::oracle, &OracleSpec::mesh_points, "oracle.mesh_points")},
      {"oracle.mesh_extent", real(&Scenario::oracle, &OracleSpec::mesh_extent, "oracle.mesh_extent")},
  };
  return table;
}

template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& body) {
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<double> scan_grid(const ScanSpec& scan) {
  std::vector<double> x(static_cast<std::size_t>(scan.points));
  for (int i = 0; i < scan.points; ++i) {
    x[i] = i == scan.points - 1 ? scan.max : scan.min + (scan.max - scan.min) * i / (scan.points - 1);
  }
  return x;
}

std::vector<std::pair<int, int>> candidate_levels(const Scenario& scenario) {
  if (scenario.model.resonances != "auto") return parse_level_list(scenario.model.resonances);
  // m = 0 has no centrifugal barrier and therefore no quasi-bound level.
  std::vector<std::pair<int, int>> levels;
  for (int n = 1; n <= 10; ++n) {
    for (int m = 1; m <= 20; ++m) levels.emplace_back(n, m);
  }
  return levels;
}

// Transverse-energy resonance of partial wave m from the exact phase shift.
std::optional<PhaseResonance> matched_level(const StringPotential& well, double total_energy, int m) {
  const double top = quasi_bound_level_model(well, total_energy, 1, m).energy;
  const double hi = std::max(2.0 * top + well.depth, 1.0);
  const int points = static_cast<int>(std::ceil(hi * 400.0)) + 1;
  const auto curve = phase_shift_curve(well, total_energy, m, linear_energy_grid(hi / points, hi, points));
  return resonance_from_phase(curve);
}

bool in_window(double value, double lo, double hi) { return value >= lo && value <= hi; }

}  // namespace

void Scenario::validate() const {
  if (!(beam.energy_ev > 0.0)) throw ConfigError("beam.energy_ev must be positive");
  if (!(beam.mass_ev >= 0.0)) throw ConfigError("beam.mass_ev must be >= 0");
  if (!model.ultrarelativistic && !(beam.energy_ev > beam.mass_ev)) {
    throw ConfigError("beam.energy_ev must exceed beam.mass_ev");
  }
  if (!(beam.angle_deg >= 0.0)) throw ConfigError("beam.angle_deg must be >= 0");
  if (!(well.depth_ev > 0.0)) throw ConfigError("well.depth_ev must be positive");
  if (!(well.inverse_radius_ev > 0.0)) throw ConfigError("well.inverse_radius_ev must be positive");
  if (!(well.length_m > 0.0)) throw ConfigError("well.length_m must be positive");
  if (!(scan.min < scan.max)) throw ConfigError("scan.min must be below scan.max");
  if (scan.points < 2) throw ConfigError("scan.points must be >= 2");
  if (scan.kind == ScanKind::Angle && scan.min < 0.0) throw ConfigError("angle scans start at >= 0 deg");
  if (scan.kind == ScanKind::Energy && !(scan.min > 0.0)) throw ConfigError("energy scans need scan.min > 0");
  if (model.resonances != "auto") parse_level_list(model.resonances);
}

StringPotential Scenario::potential() const {
  return StringPotential::make(well.depth_ev, 1.0 / well.inverse_radius_ev, to_natural_length(well.length_m));
}

Kinematics Scenario::kinematics() const {
  return model.ultrarelativistic ? Kinematics::Ultrarelativistic : Kinematics::Exact;
}

BeamState Scenario::beam_state() const {
  return beam_from(beam.energy_ev, beam.mass_ev, degrees_to_radians(beam.angle_deg), kinematics());
}

Scenario preset_si111() {
  Scenario s;
  s.name = "si111-fig2";
  s.beam = BeamSpec{15.0e6, PhysicalConstants::electron_mass, 0.1};
  s.well = WellSpec{23.0, 9.7e3, 1.4e-6};
  s.scan = ScanSpec{ScanKind::Angle, 0.0, 0.2, 2001};
  s.model.resonances = "1:1";
  return s;
}

Scenario preset_si111_energy() {
  Scenario s = preset_si111();
  s.name = "si111-energy";
  s.scan = ScanSpec{ScanKind::Energy, 5.0, 25.0, 2001};
  return s;
}

std::vector<std::pair<int, int>> parse_level_list(std::string_view text) {
  std::vector<std::pair<int, int>> out;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) throw ConfigError("resonance entries look like n:m, got '" + std::string(item) + "'");
    const int n = parse_int("model.resonances", trim(item.substr(0, colon)));
    const int m = parse_int("model.resonances", trim(item.substr(colon + 1)));
    if (n < 1 || m < 0) throw ConfigError("resonance entries need n >= 1 and m >= 0");
    out.emplace_back(n, m);
  }
  if (out.empty()) throw ConfigError("model.resonances is empty");
  return out;
}

Scenario parse_config(std::string_view text, Scenario base) {
  std::map<std::string, int> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'section.key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = fields().find(key);
    if (it == fields().end()) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (seen.count(key)) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    seen[key] = line_no;
    it->second.set(base, value);
  }
  base.validate();
  return base;
}

Scenario load_config(const std::string& path, Scenario base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

std::string canonical_config(const Scenario& scenario) {
  std::string out;
  for (const auto& [key, field] : fields()) out += key + " = " + field.get(scenario) + "\n";
  return out;
}

std::string config_hash(const Scenario& scenario) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : canonical_config(scenario)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  static const char digits[] = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = digits[h & 0xf];
    h >>= 4;
  }
  buf[16] = '\0';
  return buf;
}

std::vector<ResonanceAnnotation> scan_resonances(const Scenario& scenario) {
  const StringPotential well = scenario.potential();
  const BeamState beam = scenario.beam_state();
  const LevelVariant variant = scenario.model.level_variant;
  std::vector<ResonanceAnnotation> out;

  if (scenario.scan.kind == ScanKind::Angle) {
    const double lo = degrees_to_radians(scenario.scan.min);
    const double hi = degrees_to_radians(scenario.scan.max);
    if (variant == LevelVariant::ExactMatching) {
      std::vector<int> ms;
      for (const auto& [n, m] : candidate_levels(scenario)) {
        if (n == 1 && m >= 1 && std::find(ms.begin(), ms.end(), m) == ms.end()) ms.push_back(m);
      }
      if (scenario.model.resonances == "auto") ms.resize(std::min<std::size_t>(ms.size(), 6));
      for (const int m : ms) {
        const auto level = matched_level(well, beam.total_energy, m);
        if (!level) continue;
        const double p = beam.momentum;
        const double theta = std::sqrt(2.0 * beam.total_energy * level->energy) / p;
        const double width = level->width * beam.total_energy / (p * p * theta);
        if (in_window(theta, lo, hi)) out.push_back(ResonanceAnnotation{1, m, theta, width});
      }
      return out;
    }
    for (const auto& [n, m] : candidate_levels(scenario)) {
      if (variant == LevelVariant::ExactZero && (m > 20 || n > 50)) continue;
      double theta = 0.0;
      try {
        theta = theta_res(well, beam.total_energy, n, m, variant);
      } catch (const NoResonanceError&) {
        continue;
      }
      if (theta > 0.0 && in_window(theta, lo, hi)) {
        out.push_back(ResonanceAnnotation{n, m, theta, gamma_angle(well, beam.total_energy, n, m, variant)});
      }
    }
    return out;
  }

  const double theta0 = beam.entry_angle;
  if (!(theta0 > 0.0)) throw std::invalid_argument("energy scans need a positive entry angle");
  const double lo = scenario.scan.min * 1e6;
  const double hi = scenario.scan.max * 1e6;
  if (variant == LevelVariant::ExactMatching) {
    std::vector<int> ms;
    for (const auto& [n, m] : candidate_levels(scenario)) {
      if (n == 1 && m >= 1 && std::find(ms.begin(), ms.end(), m) == ms.end()) ms.push_back(m);
    }
    if (scenario.model.resonances == "auto") ms.resize(std::min<std::size_t>(ms.size(), 6));
    for (const int m : ms) {
      // The level depends on E through the effective mass: iterate E = 2 eps(E) / theta0^2.
      double energy = beam.total_energy;
      std::optional<PhaseResonance> level;
      for (int it = 0; it < 12; ++it) {
        level = matched_level(well, energy, m);
        if (!level) break;
        const double next = 2.0 * level->energy / (theta0 * theta0);
        const bool done = std::abs(next - energy) <= 1e-9 * next;
        energy = next;
        if (done) break;
      }
      if (!level) continue;
      const double width = 2.0 * level->width / (theta0 * theta0);
      if (in_window(energy, lo, hi)) out.push_back(ResonanceAnnotation{1, m, energy, width});
    }
    return out;
  }
  for (const auto& [n, m] : candidate_levels(scenario)) {
    if (variant == LevelVariant::ExactZero && (m > 20 || n > 50)) continue;
    const double energy = e_res(well, theta0, n, m, variant, scenario.model.printed_e_res);
    if (in_window(energy, lo, hi)) {
      out.push_back(ResonanceAnnotation{n, m, energy, gamma_energy(well, energy, n, m, variant)});
    }
  }
  return out;
}

ScanResult run_angle_scan(const Scenario& scenario, int threads) {
  scenario.validate();
  if (scenario.scan.kind != ScanKind::Angle) throw std::invalid_argument("scenario does not describe an angle scan");
  ScanResult result;
  result.scenario = scenario;
  result.x = scan_grid(scenario.scan);
  result.annotations = scan_resonances(scenario);
  result.points.resize(result.x.size());

  const StringPotential well = scenario.potential();
  const BeamState beam0 = scenario.beam_state().with_angle(0.0);
  const auto m0_states = bound_states_exact(well, beam0.total_energy, 0);
  const double theta_eff = 1.0 / std::sqrt(beam0.momentum * well.length);
  const double peak = sigma_peak_excess(beam0, well);

  parallel_for(result.x.size(), threads, [&](std::size_t i) {
    const BeamState beam = beam0.with_angle(degrees_to_radians(result.x[i]));
    CrossSectionBreakdown b;
    b.continuum = sigma_continuum_baseline(beam, well);
    if (beam.entry_angle <= theta_eff) b.bound = sigma_small_angle_m0(beam, well, m0_states).bound;
    for (const auto& r : result.annotations) {
      b.resonance += breit_wigner_excess(beam.entry_angle, r.position, r.width, peak);
    }
    b.total = b.continuum + b.bound + b.resonance;
    result.points[i] = b;
  });
  return result;
}

ScanResult run_energy_scan(const Scenario& scenario, int threads) {
  scenario.validate();
  if (scenario.scan.kind != ScanKind::Energy) throw std::invalid_argument("scenario does not describe an energy scan");
  if (!(scenario.beam.angle_deg > 0.0)) throw std::invalid_argument("energy scans need a positive entry angle");
  ScanResult result;
  result.scenario = scenario;
  result.x = scan_grid(scenario.scan);
  result.annotations = scan_resonances(scenario);
  result.points.resize(result.x.size());

  const StringPotential well = scenario.potential();
  const double theta0 = degrees_to_radians(scenario.beam.angle_deg);
  const double mass = scenario.beam.mass_ev;
  const Kinematics kin = scenario.kinematics();
  for (const double e_mev : result.x) {
    if (kin == Kinematics::Exact && !(e_mev * 1e6 > mass)) throw ConfigError("energy grid reaches below the rest mass");
  }
  std::vector<double> peaks;
  for (const auto& r : result.annotations) peaks.push_back(sigma_peak_excess(beam_from(r.position, mass, theta0, kin), well));

  parallel_for(result.x.size(), threads, [&](std::size_t i) {
    const double energy = result.x[i] * 1e6;
    const BeamState beam = beam_from(energy, mass, theta0, kin);
    CrossSectionBreakdown b;
    b.continuum = sigma_continuum_baseline(beam, well);
    for (std::size_t k = 0; k < result.annotations.size(); ++k) {
      const auto& r = result.annotations[k];
      b.resonance += breit_wigner_excess(energy, r.position, r.width, peaks[k]);
    }
    b.total = b.continuum + b.bound + b.resonance;
    result.points[i] = b;
  });
  return result;
}

ScanResult run_scan(const Scenario& scenario, int threads) {
  return scenario.scan.kind == ScanKind::Angle ? run_angle_scan(scenario, threads) : run_energy_scan(scenario, threads);
}

std::vector<double> small_angle_bound_profile(const Scenario& scenario, int threads) {
  scenario.validate();
  const StringPotential well = scenario.potential();
  const BeamState beam0 = scenario.beam_state().with_angle(0.0);
  const auto m0_states = bound_states_exact(well, beam0.total_energy, 0);
  const auto grid = scan_grid(scenario.scan);
  std::vector<double> out(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    out[i] = sigma_small_angle_m0(beam0.with_angle(degrees_to_radians(grid[i])), well, m0_states).bound;
  });
  return out;
}

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific, 11);
  return std::string(buf, res.ptr);
}

void emit_csv(const ScanResult& result, std::ostream& out) {
  const Scenario& s = result.scenario;
  const bool angle = s.scan.kind == ScanKind::Angle;
  out << "# scenario: " << s.name << "\n";
  out << "# version: " << CHANRES_VERSION << "\n";
  out << "# flags: ultrarelativistic=" << (s.model.ultrarelativistic ? "true" : "false")
      << " printed_e_res=" << (s.model.printed_e_res ? "true" : "false")
      << " level_variant=" << to_string(s.model.level_variant) << " resonances=" << s.model.resonances << "\n";
  out << "# config_hash: fnv1a64:" << config_hash(s) << "\n";
  out << "# x: " << (angle ? "entry angle theta0 [deg]" : "total energy E [MeV]") << "; sigma in eV^-2\n";
  for (const auto& r : result.annotations) {
    out << "# resonance n=" << r.n << " m=" << r.m;
    if (angle) {
      out << " theta_res_rad=" << shortest(r.position) << " gamma_rad=" << shortest(r.width)
          << " theta_res_deg=" << shortest(radians_to_degrees(r.position));
    } else {
      out << " e_res_ev=" << shortest(r.position) << " gamma_bar_ev=" << shortest(r.width);
    }
    out << "\n";
  }
  out << "x,sigma_total,sigma_continuum,sigma_bound,sigma_resonance\n";
  for (std::size_t i = 0; i < result.x.size(); ++i) {
    const auto& b = result.points[i];
    out << format_number(result.x[i]) << ',' << format_number(b.total) << ',' << format_number(b.continuum) << ','
        << format_number(b.bound) << ',' << format_number(b.resonance) << '\n';
  }
}

void emit_csv(const ScanResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  emit_csv(result, static_cast<std::ostream&>(out));
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("STRING_RESONANCE_THREADS")) {
    const std::string_view text = trim(env);
    int v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || v < 1) {
      throw ConfigError("STRING_RESONANCE_THREADS must be a positive integer");
    }
    return v;
  }
  return 1;
}

}  // namespace chanres
