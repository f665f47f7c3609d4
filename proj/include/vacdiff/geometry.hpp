#pragma once

// Collision geometry: a wide Gaussian probe crossed at right angles by a
// tightly focused target pulse. The target leaves a rectangular strip of
// uniform phase shift across the probe profile.

#include <Eigen/Core>
#include <cmath>
#include <complex>

#include "vacdiff/units.hpp"

namespace vacdiff {

/// How the probe width sigma enters the Gaussian exp(-a r^2).
enum class SigmaConvention {
  Amplitude,  ///< amplitude ~ exp(-r^2 / (2 sigma^2)), a = 1/(2 sigma^2)
  Intensity,  ///< intensity ~ exp(-r^2 / (2 sigma^2)), a = 1/(4 sigma^2)
};

struct GaussianProbe {
  double amplitude_scale = 1.0;
  double sigma_m = 1.5e-3;
  double wavelength_m = 800e-9;
  double pulse_energy_j = 10.0;
  double repetition_rate_hz = 10.0;
  double pulse_duration_s = 1e-11;
  SigmaConvention convention = SigmaConvention::Amplitude;

  /// Probe whose duration equals its transverse crossing time 2 sigma / c.
  static GaussianProbe matched(double sigma_m, double wavelength_m,
                               double pulse_energy_j, double repetition_rate_hz,
                               SigmaConvention convention = SigmaConvention::Amplitude);

  /// Gaussian exponent a in exp(-a (x^2 + y^2)), in m^-2.
  double gaussian_exponent() const;

  /// Throws DomainError on non-positive width, wavelength or energy.
  void validate() const;
};

struct TargetPulse {
  double pulse_energy_j = 10.0;
  double duration_s = 1e-15;
  double focus_half_height_m = 10e-6;
  double wavelength_m = 800e-9;
  double repetition_rate_hz = 10.0;

  void validate() const;
};

/// Rectangle |x| <= half_width, |y| <= half_height carrying phase delta.
struct PhaseRegion {
  double half_width_m = 1.5e-3;
  double half_height_m = 10e-6;
  double delta_rad = 0.0;

  void validate() const;
};

/// Closed rectangle indicator.
template <typename Scalar>
Scalar rect(Scalar x, Scalar y, const PhaseRegion& region) {
  using std::abs;
  return (abs(x) <= Scalar(region.half_width_m) && abs(y) <= Scalar(region.half_height_m))
             ? Scalar(1)
             : Scalar(0);
}

template <typename Scalar>
Scalar rect_complement(Scalar x, Scalar y, const PhaseRegion& region) {
  return Scalar(1) - rect(x, y, region);
}

/// delta = (2 pi / lambda) * dn * L.
double accumulated_phase_shift(double dn, double probe_wavelength_m,
                               double interaction_length_m);

/// Pulse energy over a top-hat cylinder of length c*tau and radius nu.
EnergyDensity target_energy_density(const TargetPulse& target);

/// Peak target intensity over the same top-hat focal spot, in W/cm^2.
double target_intensity_w_cm2(const TargetPulse& target);

/// Time for the target to sweep the probe diameter, 2 sigma / c.
double crossing_time(const GaussianProbe& probe);

/// Exit-plane field A0 exp(-a r^2) (e^{i delta} rect + rect_complement).
/// The global phase exp(i k z0) is dropped.
std::complex<double> synthesized_amplitude(double x0, double y0,
                                           const GaussianProbe& probe,
                                           const PhaseRegion& region);

/// Samples synthesized_amplitude on the tensor grid xs x ys; rows follow xs.
Eigen::ArrayXXcd sample_exit_field(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys,
                                   const GaussianProbe& probe, const PhaseRegion& region);

}  // namespace vacdiff
