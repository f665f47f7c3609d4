#pragma once

// From photon-count patterns to physics reach: counting statistics outside
// the focal spot, the polarization test, fringe-contraction fitting, and
// parameter scans and optimization over the full pipeline.

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vacdiff/experiment.hpp"
#include "vacdiff/focal_plane.hpp"
#include "vacdiff/vacuum.hpp"

namespace vacdiff {

struct SNRReport {
  double signal_photons = 0.0;
  double background_photons = 0.0;
  double dark_counts = 0.0;
  /// S / sqrt(B + dark + S); 0 when the denominator vanishes.
  double snr = 0.0;
};

/// Sums both patterns over pixels whose centre has max(|x|, |y|) >
/// exclusion_radius. Throws GridMismatchError unless the pixel centres agree.
SNRReport snr(const DiffractionPattern& signal, const DiffractionPattern& background,
              double exclusion_radius_m, double dark_counts = 0.0);

struct PolarizationRatio {
  double ratio = 0.0;
  double delta_perpendicular = 0.0;
  double delta_parallel = 0.0;
  /// Set when either phase reaches 0.1 rad, where the ratio departs from
  /// the coefficient ratio squared.
  bool large_phase = false;
};

/// Ratio of the signal terms, sin^2(delta_perp/2) / sin^2(delta_par/2).
/// Throws DomainError when delta_par is zero.
PolarizationRatio polarization_intensity_ratio(double delta_perpendicular, double delta_parallel);

/// Same ratio for a crossed-field target of density `epsilon2` seen by a probe
/// along `probe_direction` over `interaction_length_m`.
PolarizationRatio polarization_intensity_ratio(EnergyDensity epsilon2,
                                               const Eigen::Vector3d& target_direction,
                                               const Eigen::Vector3d& target_polarization,
                                               const Eigen::Vector3d& probe_direction,
                                               double probe_wavelength_m, double interaction_length_m,
                                               const VacuumModel& model = QedVacuum{});

/// Focal-plane y of the first slit zero, lambda f / (2 nu).
double first_zero_position(double nu_m, double wavelength_m, double focal_length_m);

struct FringeFit {
  double nu_effective_m = 0.0;
  double first_zero_y_m = 0.0;
  /// nu_geometric / nu_effective.
  double contraction_ratio = 0.0;
  bool long_range_flag = false;
};

/// Locates the first minimum of the x = 0 profile on the +y side (parabolic
/// refinement around the lowest pixel) and converts it to an effective slit
/// half-height. The refinement needs roughly ten pixels between the axis and
/// the first zero for 5% accuracy. The flag is raised when nu_effective >
/// nu_geometric (1 + threshold). A background, when given, is subtracted
/// pixel by pixel.
/// Throws InsufficientSignalError when the profile is zero away from the axis
/// and ExtentError when no minimum lies inside the grid.
FringeFit fringe_contraction_discriminator(const DiffractionPattern& observed, double nu_geometric_m,
                                           const FocalPlaneGrid& grid, double threshold = 0.1,
                                           const DiffractionPattern* background = nullptr);

enum class Objective { Snr, SignalPhotons, BackgroundPhotons };

/// Parses `snr`, `signal_photons`, `background_photons`.
Objective parse_objective(const std::string& name);
std::string to_string(Objective objective);

/// Config keys accepted as scan and optimization parameters.
const std::vector<std::string>& scan_parameters();

struct Evaluation {
  ExperimentResult result;
  SNRReport report;
};

/// Runs the pipeline once and scores it.
Evaluation evaluate(const ExperimentConfig& config);
double objective_value(const SNRReport& report, Objective objective);

struct ScanSpec {
  std::string parameter;
  double lo = 0.0;
  double hi = 1.0;
  int steps = 2;
  Objective objective = Objective::Snr;

  /// Throws DomainError for an unknown parameter, lo >= hi or steps < 2.
  void validate() const;
};

struct ScanRow {
  double value = 0.0;
  double objective = 0.0;
  /// "ok", or the error message of a failed evaluation.
  std::string status = "ok";
  bool ok() const { return status == "ok"; }
};

/// Evenly spaced evaluation of [lo, hi], ascending. A failing point yields a
/// flagged row; the scan continues.
std::vector<ScanRow> scan(const ScanSpec& spec, const ExperimentConfig& base);

/// `param,value,objective,status` rows.
void write_scan_csv(std::ostream& out, const std::string& parameter, const std::vector<ScanRow>& rows);

struct MaximizeOptions {
  /// Seed grid points per axis.
  int grid_points = 5;
  /// Initial simplex edge in the unit cube.
  double simplex_scale = 0.25;
  /// Stop when the simplex spans less than this in the unit cube.
  double x_tolerance = 1e-6;
};

struct MaximizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  int failures = 0;
  std::vector<std::string> log;
};

/// Deterministic bounded maximization: a coarse grid of seeds followed by
/// Nelder-Mead from the best seed, in coordinates scaled to [0, 1]. Trial
/// points are clamped to the box. The grid takes what the budget leaves after
/// the d + 1 simplex vertices, so budget = d + 1 evaluates the initial simplex
/// only. An objective that throws counts as a failed evaluation. Throws
/// OptimizationError when every evaluation fails, DomainError on bad bounds
/// or budget < d + 1.
MaximizeResult maximize(const std::function<double(const Eigen::VectorXd&)>& objective,
                        const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int budget,
                        const MaximizeOptions& options = {});

struct ParameterBound {
  std::string parameter;
  double lo = 0.0;
  double hi = 1.0;
};

struct OptimizeResult {
  ExperimentConfig config;
  std::vector<double> values;
  double objective = 0.0;
  int evaluations = 0;
  std::vector<std::string> log;
};

OptimizeResult optimize(const std::vector<ParameterBound>& bounds, const ExperimentConfig& base,
                        Objective objective, int budget, const MaximizeOptions& options = {});

}  // namespace vacdiff
