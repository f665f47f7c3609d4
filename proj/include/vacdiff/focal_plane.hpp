#pragma once

// Fraunhofer pattern of the phase-imprinted probe at the focal plane of a
// thin lens. Focal-plane position x maps to spatial frequency
// omega = 2 pi x / (lambda f). With the exit field
//   psi = A0 exp(-a r^2) [e^{i delta} rect + (1 - rect)],
// the transform is F = A0 [C_bkg + (e^{i delta} - 1) C_sig], both real, and
//   I = (A0 / (f lambda))^2 |F / A0|^2.

#include <Eigen/Core>
#include <cmath>
#include <iosfwd>
#include <optional>
#include <vector>

#include "vacdiff/geometry.hpp"

namespace vacdiff {

enum class PixelRule {
  /// Separable adaptive integration of the exact pattern over each pixel.
  Adaptive,
  /// supersampling x supersampling midpoint samples per pixel.
  Midpoint,
};

/// Square pixels centred on the optical axis. Pixel k covers
/// [(k - 1/2) p, (k + 1/2) p] for |k| <= K, K = floor(half_extent / p), so the
/// camera spans (2K + 1) pixels per side.
struct FocalPlaneGrid {
  double focal_length_m = 5e-3;
  double wavelength_m = 800e-9;
  double pixel_m = 50e-6;
  double half_extent_m = 1e-3;
  int supersampling = 4;
  PixelRule rule = PixelRule::Adaptive;

  void validate() const;
  int half_count() const;
  int pixels_per_side() const { return 2 * half_count() + 1; }
  Eigen::VectorXd pixel_centers() const;
  /// Focal-plane distance corresponding to unit spatial frequency.
  double metres_per_radian() const { return wavelength_m * focal_length_m / (2.0 * constants::pi); }
};

struct SpatialFrequency {
  double wx = 0.0;  ///< rad/m
  double wy = 0.0;
};

SpatialFrequency spatial_frequency(double x, double y, const FocalPlaneGrid& grid);

template <typename Scalar>
Scalar sinc(Scalar t) {
  using std::abs;
  using std::sin;
  if (abs(t) < Scalar(1e-4)) {
    const Scalar t2 = t * t;
    return Scalar(1) - t2 / Scalar(6) + t2 * t2 / Scalar(120);
  }
  return sin(t) / t;
}

/// sinc^2(mu wx) sinc^2(nu wy).
template <typename Scalar>
Scalar slit_pattern(const SpatialFrequency& w, Scalar mu, Scalar nu) {
  const Scalar sx = sinc(mu * Scalar(w.wx));
  const Scalar sy = sinc(nu * Scalar(w.wy));
  return sx * sx * sy * sy;
}

/// integral_{-half}^{half} exp(-a x^2) cos(omega x) dx by adaptive
/// Gauss-Kronrod, relative tolerance 1e-10. Throws NumericError on failure.
double truncated_gaussian_cosine(double omega, double a, double half);

/// Product of the two truncated Gaussian cosine integrals (m^2).
double c_sig(const SpatialFrequency& w, double a, double mu, double nu);

/// (pi / a) exp(-(wx^2 + wy^2) / (4 a)).
double c_bkg(const SpatialFrequency& w, double a);

struct FocalIntensityModel {
  double amplitude = 1.0;
  double gaussian_exponent = 1.0 / (2.0 * 1.5e-3 * 1.5e-3);
  double focal_length_m = 5e-3;
  double wavelength_m = 800e-9;
  PhaseRegion region;

  static FocalIntensityModel from(const GaussianProbe& probe, const PhaseRegion& region,
                                  const FocalPlaneGrid& grid);
  void validate() const;
  double prefactor() const {
    const double s = amplitude / (focal_length_m * wavelength_m);
    return s * s;
  }
};

/// Combines precomputed factors into the focal intensity; the phase enters as
/// 2 sin^2(delta/2) so that delta ~ 1e-10 survives. Throws NumericError when
/// the result is negative beyond round-off.
double combine_intensity(double prefactor, double csig, double cbkg, double delta);

double intensity(const SpatialFrequency& w, const FocalIntensityModel& model);

enum class PatternKind { Intensity, PhotonCount };
enum class Provenance { Analytic, FftOracle };

/// Values are indexed (ix, iy) and sit at (xs[ix], ys[iy]).
struct DiffractionPattern {
  FocalPlaneGrid grid;
  Eigen::VectorXd xs;
  Eigen::VectorXd ys;
  Eigen::ArrayXXd values;
  PatternKind kind = PatternKind::Intensity;
  Provenance provenance = Provenance::Analytic;
  /// Photons falling outside the camera (PhotonCount only).
  double remainder = 0.0;
  /// Source model, when the pattern is analytic.
  std::optional<FocalIntensityModel> model;

  double total() const { return values.sum(); }
  /// Index of the column (ix) closest to x = 0.
  Eigen::Index center_column() const;
};

/// Intensity at the given focal-plane coordinates.
DiffractionPattern analytic_pattern(const FocalIntensityModel& model, const Eigen::VectorXd& xs,
                                    const Eigen::VectorXd& ys, const FocalPlaneGrid& grid);

/// Intensity at the pixel centres of `grid`.
DiffractionPattern analytic_pattern(const FocalIntensityModel& model, const FocalPlaneGrid& grid);

struct FftOracleOptions {
  /// Minimum cells across each half-width segment of the phase region.
  int region_samples = 64;
  /// Odd degree of the piecewise interpolant behind the transform.
  int degree = 5;
};

/// Independent numeric route: samples the exit field, transforms it with an
/// FFT (Gaussian factor) and endpoint-corrected direct sums (phase region),
/// and maps |F|^2 to focal-plane coordinates cropped to the grid extent.
/// `samples` is the FFT length per axis (power of two >= 256); the Gaussian
/// is sampled over +-6 sigma on samples/4 nodes. Throws ResolutionError when
/// the Gaussian or the region is under-resolved.
DiffractionPattern fft_oracle(const GaussianProbe& probe, const PhaseRegion& region,
                              const FocalPlaneGrid& grid, int samples,
                              const FftOracleOptions& options = {});

/// Per-axis integrals over a band [w0, w1] of spatial frequency:
/// ss = int S^2, sb = int S B, bb = int B^2 with S the truncated and B the
/// full Gaussian cosine transform.
struct AxisBand {
  double ss = 0.0;
  double sb = 0.0;
  double bb = 0.0;
};

/// Band integrals for consecutive intervals of `edges` (ascending).
std::vector<AxisBand> axis_band_integrals(double a, double half, const std::vector<double>& edges);

/// Plane-integrated |F/A0|^2 over all spatial frequencies, 2 pi^3 / a.
double total_spectral_power(double a);

/// Fraction of the total power inside |x| <= half_x, |y| <= half_y.
double box_fraction(const FocalIntensityModel& model, double half_x, double half_y);

/// Band integrals for every pixel row and column of a camera. They do not
/// depend on the phase shift, so one set serves any number of patterns.
struct PixelBands {
  std::vector<AxisBand> x;
  std::vector<AxisBand> y;
};

PixelBands pixel_bands(const FocalIntensityModel& model, const FocalPlaneGrid& grid);

/// Photon counts from precomputed bands; `model.region.delta_rad` selects
/// the pattern.
DiffractionPattern counts_from_bands(const PixelBands& bands, const FocalIntensityModel& model,
                                     double photons, const FocalPlaneGrid& grid);

/// Photon counts per pixel of `grid` for a total of photons_per_pulse *
/// n_pulses photons across the whole plane. The input must be analytic.
/// Photons beyond the camera go to `remainder`.
DiffractionPattern pixelize_and_count(const DiffractionPattern& pattern, double photons_per_pulse,
                                      double n_pulses, const FocalPlaneGrid& grid);

/// Writes `x_m,y_m,photons` rows, x slowest.
void write_pattern_csv(std::ostream& out, const DiffractionPattern& pattern);

}  // namespace vacdiff
