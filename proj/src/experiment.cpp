#include "vacdiff/experiment.hpp"

#include <cmath>

#include "vacdiff/errors.hpp"

namespace vacdiff {

namespace {

void positive(double v, const char* key) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key, 0, "must be positive");
}

void non_negative(double v, const char* key) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(key, 0, "must be non-negative");
}

}  // namespace

void ExperimentConfig::validate() const {
  positive(probe.energy_j, "probe.energy_J");
  positive(probe.wavelength_m, "probe.wavelength_m");
  positive(probe.sigma_m, "probe.sigma_m");
  positive(probe.rep_rate_hz, "probe.rep_rate_hz");
  positive(target.energy_j, "target.energy_J");
  positive(target.duration_s, "target.duration_s");
  positive(target.nu_m, "target.nu_m");
  positive(target.wavelength_m, "target.wavelength_m");
  if (target.region_half_width_m) positive(*target.region_half_width_m, "target.region_half_width_m");
  positive(optics.focal_length_m, "optics.focal_length_m");
  positive(optics.pixel_m, "optics.pixel_m");
  positive(optics.half_extent_m, "optics.half_extent_m");
  if (optics.half_extent_m < 0.5 * optics.pixel_m) {
    throw ConfigError("optics.half_extent_m", 0, "must cover at least the central pixel");
  }
  if (optics.half_extent_m / optics.pixel_m > 5000.0) {
    throw ConfigError("optics.half_extent_m", 0, "more than 10001 pixels per side");
  }
  if (optics.supersample < 1) throw ConfigError("optics.supersample", 0, "must be at least 1");

  const bool hidden = vacuum.model == VacuumKind::Scalar || vacuum.model == VacuumKind::Pseudoscalar;
  if (hidden) {
    if (!vacuum.g_gev_inv) throw ConfigError("vacuum.g_gev_inv", 0, "required for hidden-field models");
    if (!vacuum.mass_ev) throw ConfigError("vacuum.mass_ev", 0, "required for hidden-field models");
    positive(*vacuum.g_gev_inv, "vacuum.g_gev_inv");
    positive(*vacuum.mass_ev, "vacuum.mass_ev");
  } else {
    if (vacuum.g_gev_inv) throw ConfigError("vacuum.g_gev_inv", 0, "only valid for hidden-field models");
    if (vacuum.mass_ev) throw ConfigError("vacuum.mass_ev", 0, "only valid for hidden-field models");
  }
  if (vacuum.interaction_length_m) positive(*vacuum.interaction_length_m, "vacuum.interaction_length_m");

  non_negative(plasma.pressure_pa, "plasma.pressure_pa");
  positive(plasma.temperature_k, "plasma.temperature_k");
  non_negative(plasma.electrons_per_molecule, "plasma.electrons_per_molecule");
  non_negative(plasma.intensity_w_cm2, "plasma.intensity_w_cm2");

  positive(run.integration_s, "run.integration_s");
  non_negative(run.exclusion_radius_m, "run.exclusion_radius_m");
  non_negative(run.dark_counts, "run.dark_counts");
  if (!(run.efficiency > 0.0) || !(run.efficiency <= 1.0)) {
    throw ConfigError("run.efficiency", 0, "must lie in (0, 1]");
  }
}

GaussianProbe ExperimentConfig::gaussian_probe() const {
  GaussianProbe p = GaussianProbe::matched(probe.sigma_m, probe.wavelength_m, probe.energy_j,
                                           probe.rep_rate_hz, probe.sigma_convention);
  return p;
}

TargetPulse ExperimentConfig::target_pulse() const {
  TargetPulse t;
  t.pulse_energy_j = target.energy_j;
  t.duration_s = target.duration_s;
  t.focus_half_height_m = target.nu_m;
  t.wavelength_m = target.wavelength_m;
  t.repetition_rate_hz = probe.rep_rate_hz;
  return t;
}

FocalPlaneGrid ExperimentConfig::focal_grid() const {
  FocalPlaneGrid g;
  g.focal_length_m = optics.focal_length_m;
  g.wavelength_m = probe.wavelength_m;
  g.pixel_m = optics.pixel_m;
  g.half_extent_m = optics.half_extent_m;
  g.supersampling = optics.supersample;
  g.rule = optics.pixel_rule;
  return g;
}

VacuumModel ExperimentConfig::vacuum_model() const {
  switch (vacuum.model) {
    case VacuumKind::Scalar:
      return HiddenScalar{*vacuum.g_gev_inv, *vacuum.mass_ev};
    case VacuumKind::Pseudoscalar:
      return HiddenPseudoscalar{*vacuum.g_gev_inv, *vacuum.mass_ev};
    default:
      return QedVacuum{};
  }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult r;
  const GaussianProbe probe = config.gaussian_probe();
  const TargetPulse target = config.target_pulse();
  const FocalPlaneGrid grid = config.focal_grid();
  const double length = config.interaction_length();
  r.interaction_length_m = length;

  const EnergyDensity rho = target_energy_density(target);
  r.energy_density_jpum3 = rho.joule_per_um3();
  if (config.vacuum.model != VacuumKind::None) {
    const CrossedFieldTarget field(rho, Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY());
    r.vacuum_delta_n = refractive_index_shift(config.run.polarization, field,
                                              Eigen::Vector3d::UnitZ(), config.vacuum_model());
  }
  r.vacuum_delta_rad = accumulated_phase_shift(r.vacuum_delta_n, probe.wavelength_m, length);

  if (config.plasma.pressure_pa > 0.0) {
    r.electron_density_cm3 = pressure_to_electron_density(
        config.plasma.pressure_pa, config.plasma.temperature_k, config.plasma.electrons_per_molecule);
  }
  PlasmaState plasma{r.electron_density_cm3, probe.wavelength_m * 1e6, config.plasma.intensity_w_cm2};
  r.plasma_delta_n = plasma_index_shift(plasma);
  r.plasma_delta_rad = accumulated_phase_shift(r.plasma_delta_n, probe.wavelength_m, length);
  r.net_delta_rad = r.vacuum_delta_rad - r.plasma_delta_rad;

  r.photons_per_pulse = photons_per_pulse(probe.pulse_energy_j, probe.wavelength_m) * config.run.efficiency;
  r.n_pulses = probe.repetition_rate_hz * config.run.integration_s;
  r.total_photons = r.photons_per_pulse * r.n_pulses;

  PhaseRegion region{config.region_half_width(), config.target.nu_m, r.net_delta_rad};
  FocalIntensityModel model = FocalIntensityModel::from(probe, region, grid);

  FocalIntensityModel reference = model;
  reference.region.delta_rad = 0.0;
  if (config.run.exclusion_radius_m > 0.0) {
    r.confined_fraction =
        box_fraction(reference, config.run.exclusion_radius_m, config.run.exclusion_radius_m);
  }

  FocalIntensityModel plasma_only = model;
  plasma_only.region.delta_rad = -r.plasma_delta_rad;
  if (grid.rule == PixelRule::Adaptive) {
    const PixelBands bands = pixel_bands(model, grid);
    r.signal = counts_from_bands(bands, model, r.total_photons, grid);
    r.background = counts_from_bands(bands, plasma_only, r.total_photons, grid);
  } else {
    r.signal = pixelize_and_count(analytic_pattern(model, grid), r.photons_per_pulse, r.n_pulses, grid);
    r.background =
        pixelize_and_count(analytic_pattern(plasma_only, grid), r.photons_per_pulse, r.n_pulses, grid);
  }
  return r;
}

}  // namespace vacdiff
