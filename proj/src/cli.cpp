#include "vacdiff/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "vacdiff/config.hpp"
#include "vacdiff/errors.hpp"
#include "vacdiff/experiment.hpp"
#include "vacdiff/format.hpp"
#include "vacdiff/horizon.hpp"
#include "vacdiff/sensitivity.hpp"
#include "vacdiff/units.hpp"
#include "vacdiff/vacuum.hpp"

namespace vacdiff {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

ExperimentConfig load_config(const CommonOptions& opts) {
  ExperimentConfig config;
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path, std::ios::binary);
    if (!in) throw UsageError("cannot read config file '" + opts.config_path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    config = parse_config(text.str());
  }
  for (const std::string& s : opts.overrides) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + s + "'");
    apply_setting(config, trim(std::string_view(s).substr(0, eq)), trim(std::string_view(s).substr(eq + 1)));
  }
  config.validate();
  return config;
}

fs::path output_dir(const CommonOptions& opts) {
  fs::path dir = ".";
  if (!opts.out_dir.empty()) {
    dir = opts.out_dir;
  } else if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
    dir = env;
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw UsageError("cannot write '" + path.string() + "'");
}

std::string header(const std::string& command, const ExperimentConfig* config) {
  std::ostringstream h;
  h << "# vacdiff " << VACDIFF_VERSION << '\n' << "# command: " << command << '\n';
  if (config != nullptr) {
    std::istringstream lines(serialize_config(*config));
    std::string line;
    while (std::getline(lines, line)) h << "# " << line << '\n';
  }
  return h.str();
}

void kv(std::ostream& out, const std::string& key, double value) {
  out << key << " = " << format_sci(value) << '\n';
}

int cmd_simulate(const CommonOptions& opts, std::ostream& out) {
  const ExperimentConfig config = load_config(opts);
  const fs::path dir = output_dir(opts);
  const ExperimentResult r = run_experiment(config);
  const SNRReport report = snr(r.signal, r.background, config.run.exclusion_radius_m, config.run.dark_counts);
  const std::string head = header("simulate", &config);

  std::ostringstream pattern;
  pattern << head;
  write_pattern_csv(pattern, r.signal);
  write_file(dir / "pattern.csv", pattern.str());

  std::ostringstream profile;
  profile << head << "y_m,signal,background\n";
  const Eigen::Index c0 = r.signal.center_column();
  for (Eigen::Index j = 0; j < r.signal.ys.size(); ++j) {
    profile << format_sci(r.signal.ys[j]) << ',' << format_sci(r.signal.values(c0, j)) << ','
            << format_sci(r.background.values(c0, j)) << '\n';
  }
  write_file(dir / "profile_y.csv", profile.str());

  std::ostringstream summary;
  summary << head;
  kv(summary, "energy_density_J_per_um3", r.energy_density_jpum3);
  kv(summary, "vacuum_delta_n", r.vacuum_delta_n);
  kv(summary, "interaction_length_m", r.interaction_length_m);
  kv(summary, "vacuum_delta_rad", r.vacuum_delta_rad);
  kv(summary, "electron_density_cm3", r.electron_density_cm3);
  kv(summary, "plasma_delta_n", r.plasma_delta_n);
  kv(summary, "plasma_delta_rad", r.plasma_delta_rad);
  kv(summary, "net_delta_rad", r.net_delta_rad);
  kv(summary, "photons_per_pulse", r.photons_per_pulse);
  kv(summary, "n_pulses", r.n_pulses);
  kv(summary, "total_photons", r.total_photons);
  kv(summary, "confined_fraction", r.confined_fraction);
  kv(summary, "first_zero_y_m",
     first_zero_position(config.target.nu_m, config.probe.wavelength_m, config.optics.focal_length_m));
  kv(summary, "signal_photons", report.signal_photons);
  kv(summary, "background_photons", report.background_photons);
  kv(summary, "dark_counts", report.dark_counts);
  kv(summary, "snr", report.snr);
  write_file(dir / "summary.txt", summary.str());
  out << summary.str();
  return kExitOk;
}

struct ScanOptions {
  std::string param;
  double lo = 0.0;
  double hi = 0.0;
  int steps = 2;
  std::string objective = "snr";
};

Objective objective_flag(const std::string& name) {
  try {
    return parse_objective(name);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

void check_parameter(const std::string& name) {
  const auto& names = scan_parameters();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    std::string known;
    for (const auto& n : names) known += (known.empty() ? "" : ", ") + n;
    throw UsageError("cannot scan '" + name + "'; choose one of " + known);
  }
}

int cmd_scan(const CommonOptions& opts, const ScanOptions& s, std::ostream& out) {
  check_parameter(s.param);
  ScanSpec spec{s.param, s.lo, s.hi, s.steps, objective_flag(s.objective)};
  try {
    spec.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  const ExperimentConfig config = load_config(opts);
  const fs::path dir = output_dir(opts);
  const std::vector<ScanRow> rows = scan(spec, config);
  std::ostringstream csv;
  csv << header("scan", &config) << "# objective: " << to_string(spec.objective) << '\n';
  write_scan_csv(csv, spec.parameter, rows);
  write_file(dir / "scan.csv", csv.str());
  const auto failed = std::count_if(rows.begin(), rows.end(), [](const ScanRow& r) { return !r.ok(); });
  out << "rows = " << rows.size() << "\nfailed = " << failed << '\n';
  return kExitOk;
}

struct OptimizeOptions {
  std::vector<std::string> bounds;
  int budget = 40;
  std::string objective = "snr";
};

ParameterBound parse_bound(const std::string& text) {
  const auto eq = text.find('=');
  const auto colon = text.find(':', eq == std::string::npos ? 0 : eq);
  if (eq == std::string::npos || colon == std::string::npos) {
    throw UsageError("--bound expects param=lo:hi, got '" + text + "'");
  }
  ParameterBound b;
  b.parameter = trim(std::string_view(text).substr(0, eq));
  check_parameter(b.parameter);
  const auto number = [&](std::string_view s) {
    const std::string t = trim(s);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
      throw UsageError("bad number '" + t + "' in --bound " + text);
    }
    return v;
  };
  b.lo = number(std::string_view(text).substr(eq + 1, colon - eq - 1));
  b.hi = number(std::string_view(text).substr(colon + 1));
  if (!(b.lo < b.hi)) throw UsageError("--bound needs lo < hi: " + text);
  return b;
}

int cmd_optimize(const CommonOptions& opts, const OptimizeOptions& o, std::ostream& out) {
  std::vector<ParameterBound> bounds;
  for (const auto& b : o.bounds) bounds.push_back(parse_bound(b));
  const Objective objective = objective_flag(o.objective);
  if (o.budget < static_cast<int>(bounds.size()) + 1) {
    throw UsageError("--budget must be at least the number of bounds plus one");
  }
  const ExperimentConfig config = load_config(opts);
  const fs::path dir = output_dir(opts);
  const OptimizeResult r = optimize(bounds, config, objective, o.budget);

  std::ostringstream report;
  report << header("optimize", &config);
  report << "objective = " << to_string(objective) << '\n';
  kv(report, "objective_value", r.objective);
  report << "evaluations = " << r.evaluations << '\n';
  for (std::size_t i = 0; i < bounds.size(); ++i) kv(report, bounds[i].parameter, r.values[i]);
  write_file(dir / "optimize.txt", report.str());

  std::ostringstream log;
  for (const auto& line : r.log) log << line << '\n';
  write_file(dir / "optimize_log.txt", log.str());

  std::ostringstream best;
  best << "# vacdiff " << VACDIFF_VERSION << "\n# optimum configuration\n" << serialize_config(r.config);
  write_file(dir / "optimum.cfg", best.str());
  out << report.str();
  return kExitOk;
}

struct UnruhOptions {
  double efield = 1e12;
  double beam_mev = 35.4;
};

int cmd_unruh(const UnruhOptions& u, std::ostream& out) {
  const ElectronBeam beam{u.beam_mev, 1.0};
  const double a = acceleration_from_field(u.efield);
  const double t = unruh_temperature_ev(a);
  std::ostringstream report;
  report << header("unruh", nullptr);
  kv(report, "efield_v_per_m", u.efield);
  kv(report, "acceleration_m_per_s2", a);
  kv(report, "unruh_kT_ev", t);
  kv(report, "beam_gamma", beam.gamma());
  kv(report, "lab_energy_ev", lab_frame_energy(t, beam.gamma()));
  out << report.str();
  return kExitOk;
}

struct ComptonOptions {
  double beam_mev = 35.4;
  double lambda_nm = 800.0;
  double angle_deg = 90.0;
};

int cmd_compton(const ComptonOptions& c, std::ostream& out) {
  const ElectronBeam beam{c.beam_mev, 1.0};
  LaserField laser;
  laser.wavelength_nm = c.lambda_nm;
  const double angle = c.angle_deg / 180.0 * constants::pi;
  std::ostringstream report;
  report << header("compton", nullptr);
  kv(report, "beam_gamma", beam.gamma());
  kv(report, "laser_photon_ev", laser.photon_energy_ev());
  kv(report, "crossing_angle_deg", c.angle_deg);
  kv(report, "compton_endpoint_kev", compton_endpoint_kev(beam, laser, angle));
  kv(report, "thomson_endpoint_kev", thomson_endpoint_kev(beam, laser, angle));
  out << report.str();
  return kExitOk;
}

int cmd_plasma(const CommonOptions& opts, std::ostream& out) {
  const ExperimentConfig config = load_config(opts);
  const double lambda_um = config.probe.wavelength_m * 1e6;
  PlasmaState p;
  p.electron_density_cm3 = pressure_to_electron_density(config.plasma.pressure_pa, config.plasma.temperature_k,
                                                        config.plasma.electrons_per_molecule);
  p.laser_wavelength_um = lambda_um;
  p.laser_intensity_w_cm2 = config.plasma.intensity_w_cm2;
  const double shift = plasma_index_shift(p);
  std::ostringstream report;
  report << header("plasma", &config);
  kv(report, "electron_density_cm3", p.electron_density_cm3);
  kv(report, "plasma_frequency_rad_s", plasma_frequency(p.electron_density_cm3));
  kv(report, "critical_density_cm3", critical_density_exact(lambda_um));
  kv(report, "critical_density_formula_cm3", critical_density(lambda_um));
  kv(report, "a0", normalized_vector_potential(p));
  kv(report, "quiver_gamma", relativistic_gamma(p));
  kv(report, "index_shift", shift);
  kv(report, "index_shift_exact", 1.0 - plasma_refractive_index(p));
  kv(report, "phase_rad", 2.0 * constants::pi / config.probe.wavelength_m * shift * config.interaction_length());
  out << report.str();
  return kExitOk;
}

struct LarmorOptions {
  double beam_mev = 35.4;
  double intensity = 1e17;
  double lambda_nm = 800.0;
  int cycles = 10;
  int steps_per_cycle = 256;
  double band_min_nm = 400.0;
  double band_max_nm = 700.0;
  double solid_angle_sr = 4e-8;
  std::optional<double> cutoff_ev;
};

int cmd_larmor(const CommonOptions& opts, const LarmorOptions& l, std::ostream& out) {
  const ElectronBeam beam{l.beam_mev, 1.0};
  PlaneWavePulse pulse;
  pulse.laser = LaserField{l.intensity, l.lambda_nm};
  pulse.cycles = l.cycles;
  pulse.validate();
  pulse.delay_s = pulse.period();
  // Electron along the polarization, crossing the laser at right angles.
  ElectronState s;
  s.p = Eigen::Vector3d(beam.momentum(), 0.0, 0.0);
  const Trajectory traj =
      push_electron(s, pulse, pulse.period() / l.steps_per_cycle, (l.cycles + 2) * l.steps_per_cycle);
  const VisibleYield y =
      larmor_visible_yield(traj, l.band_min_nm * 1e-9, l.band_max_nm * 1e-9, l.solid_angle_sr, l.cutoff_ev);
  const fs::path dir = output_dir(opts);
  std::ostringstream csv;
  csv << header("larmor", nullptr);
  write_trajectory_csv(csv, traj);
  write_file(dir / "trajectory.csv", csv.str());

  std::ostringstream report;
  report << header("larmor", nullptr);
  kv(report, "a0", pulse.laser.a0());
  kv(report, "radiated_energy_j", y.radiated_energy_j);
  kv(report, "cutoff_energy_ev", y.cutoff_energy_ev);
  kv(report, "band_fraction", y.band_fraction);
  kv(report, "acceptance_fraction", y.acceptance_fraction);
  kv(report, "visible_photons_per_electron", y.photons);
  out << report.str();
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Vacuum diffraction and electron-laser crossing simulator", "vacdiff"};
  app.set_version_flag("--version", std::string(VACDIFF_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  CommonOptions common;
  app.add_option("--config", common.config_path, "key = value configuration file");
  app.add_option("--out", common.out_dir, std::string("Output directory (default $") + kOutputDirEnv + " or .)");
  app.add_option("--set", common.overrides, "Override one key, key=value (repeatable)");

  auto* simulate = app.add_subcommand("simulate", "Focal-plane pattern, y profile and summary");

  ScanOptions scan_opts;
  auto* scan_cmd = app.add_subcommand("scan", "Objective over one parameter");
  scan_cmd->add_option("--param", scan_opts.param, "Configuration key")->required();
  scan_cmd->add_option("--lo", scan_opts.lo, "Lower end")->required();
  scan_cmd->add_option("--hi", scan_opts.hi, "Upper end")->required();
  scan_cmd->add_option("--steps", scan_opts.steps, "Number of points")->required();
  scan_cmd->add_option("--objective", scan_opts.objective, "snr, signal_photons or background_photons");

  OptimizeOptions opt_opts;
  auto* optimize_cmd = app.add_subcommand("optimize", "Maximize the objective within bounds");
  optimize_cmd->add_option("--bound", opt_opts.bounds, "param=lo:hi (repeatable)")->required();
  optimize_cmd->add_option("--budget", opt_opts.budget, "Pipeline evaluations");
  optimize_cmd->add_option("--objective", opt_opts.objective, "snr, signal_photons or background_photons");

  UnruhOptions unruh_opts;
  auto* unruh_cmd = app.add_subcommand("unruh", "Unruh temperature and lab-frame energy");
  unruh_cmd->add_option("--efield", unruh_opts.efield, "Field strength, V/m");
  unruh_cmd->add_option("--beam-mev", unruh_opts.beam_mev, "Total electron energy, MeV");

  ComptonOptions compton_opts;
  auto* compton_cmd = app.add_subcommand("compton", "Compton end-point energy");
  compton_cmd->add_option("--beam-mev", compton_opts.beam_mev, "Total electron energy, MeV");
  compton_cmd->add_option("--lambda-nm", compton_opts.lambda_nm, "Laser wavelength, nm");
  compton_cmd->add_option("--angle-deg", compton_opts.angle_deg, "Crossing angle, degrees (180 = head-on)");

  auto* plasma_cmd = app.add_subcommand("plasma", "Residual-gas plasma quantities");

  LarmorOptions larmor_opts;
  double cutoff = 0.0;
  auto* larmor_cmd = app.add_subcommand("larmor", "Electron trajectory and visible Larmor yield");
  larmor_cmd->add_option("--beam-mev", larmor_opts.beam_mev, "Total electron energy, MeV");
  larmor_cmd->add_option("--intensity", larmor_opts.intensity, "Laser intensity, W/cm^2");
  larmor_cmd->add_option("--lambda-nm", larmor_opts.lambda_nm, "Laser wavelength, nm");
  larmor_cmd->add_option("--cycles", larmor_opts.cycles, "Pulse length in cycles");
  larmor_cmd->add_option("--steps-per-cycle", larmor_opts.steps_per_cycle, "Pusher steps per optical cycle");
  larmor_cmd->add_option("--band-min-nm", larmor_opts.band_min_nm, "Short edge of the band, nm");
  larmor_cmd->add_option("--band-max-nm", larmor_opts.band_max_nm, "Long edge of the band, nm");
  larmor_cmd->add_option("--solid-angle-sr", larmor_opts.solid_angle_sr, "Collection solid angle, sr");
  auto* cutoff_opt = larmor_cmd->add_option("--cutoff-ev", cutoff, "Spectrum cutoff, eV");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(common, out);
    if (scan_cmd->parsed()) return cmd_scan(common, scan_opts, out);
    if (optimize_cmd->parsed()) return cmd_optimize(common, opt_opts, out);
    if (unruh_cmd->parsed()) return cmd_unruh(unruh_opts, out);
    if (compton_cmd->parsed()) return cmd_compton(compton_opts, out);
    if (plasma_cmd->parsed()) return cmd_plasma(common, out);
    if (larmor_cmd->parsed()) {
      if (cutoff_opt->count() > 0) larmor_opts.cutoff_ev = cutoff;
      return cmd_larmor(common, larmor_opts, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace vacdiff
