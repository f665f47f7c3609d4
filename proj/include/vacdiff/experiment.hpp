#pragma once

// End-to-end pipeline: target energy density -> vacuum and plasma index
// shifts -> phase in the crossing region -> focal-plane photon counts.
//
// Geometry: the probe travels along +z, the target along +x with its
// electric field along y, so the two beams cross at right angles.

#include <optional>
#include <string>

#include "vacdiff/focal_plane.hpp"
#include "vacdiff/vacuum.hpp"

namespace vacdiff {

enum class VacuumKind { None, Qed, Scalar, Pseudoscalar };

struct ExperimentConfig {
  struct Probe {
    double energy_j = 10.0;
    double wavelength_m = 800e-9;
    double sigma_m = 1.5e-3;
    double rep_rate_hz = 10.0;
    SigmaConvention sigma_convention = SigmaConvention::Amplitude;
  } probe;

  struct Target {
    double energy_j = 10.0;
    double duration_s = 1e-15;
    double nu_m = 10e-6;
    double wavelength_m = 800e-9;
    /// Half-width of the phase region along x; the probe sigma when unset.
    std::optional<double> region_half_width_m;
  } target;

  struct Optics {
    double focal_length_m = 5e-3;
    double pixel_m = 50e-6;
    double half_extent_m = 1e-3;
    int supersample = 4;
    PixelRule pixel_rule = PixelRule::Adaptive;
  } optics;

  struct Vacuum {
    VacuumKind model = VacuumKind::Qed;
    std::optional<double> g_gev_inv;
    std::optional<double> mass_ev;
    /// Path length through the target focus; 2 nu when unset.
    std::optional<double> interaction_length_m;
  } vacuum;

  struct Plasma {
    double pressure_pa = 1e-6;
    double temperature_k = 293.0;
    double electrons_per_molecule = 1.0;
    /// Laser intensity setting the electron quiver gamma; 0 keeps gamma = 1.
    double intensity_w_cm2 = 0.0;
  } plasma;

  struct Run {
    double integration_s = 86400.0;
    ProbePolarization polarization = ProbePolarization::Perpendicular;
    double exclusion_radius_m = 5e-6;
    double dark_counts = 0.0;
    /// Detection efficiency applied to every photon.
    double efficiency = 1.0;
  } run;

  /// Throws ConfigError naming the first offending key.
  void validate() const;

  double region_half_width() const { return target.region_half_width_m.value_or(probe.sigma_m); }
  double interaction_length() const {
    return vacuum.interaction_length_m.value_or(2.0 * target.nu_m);
  }
  GaussianProbe gaussian_probe() const;
  TargetPulse target_pulse() const;
  FocalPlaneGrid focal_grid() const;
  VacuumModel vacuum_model() const;
};

struct ExperimentResult {
  double energy_density_jpum3 = 0.0;
  double vacuum_delta_n = 0.0;
  double interaction_length_m = 0.0;
  double vacuum_delta_rad = 0.0;
  double electron_density_cm3 = 0.0;
  double plasma_delta_n = 0.0;
  double plasma_delta_rad = 0.0;
  /// Phase seen by the probe: vacuum minus plasma.
  double net_delta_rad = 0.0;
  double photons_per_pulse = 0.0;
  double n_pulses = 0.0;
  double total_photons = 0.0;
  /// Fraction of photons inside the exclusion box without any phase step.
  double confined_fraction = 0.0;
  /// Observed counts (vacuum and plasma phase together).
  DiffractionPattern signal;
  /// Counts with the plasma phase alone: Gaussian spot plus plasma fringes.
  DiffractionPattern background;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace vacdiff
