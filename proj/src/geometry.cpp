#include "vacdiff/geometry.hpp"

#include <string>

#include "vacdiff/errors.hpp"

namespace vacdiff {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

GaussianProbe GaussianProbe::matched(double sigma_m, double wavelength_m,
                                     double pulse_energy_j, double repetition_rate_hz,
                                     SigmaConvention convention) {
  GaussianProbe p;
  p.sigma_m = sigma_m;
  p.wavelength_m = wavelength_m;
  p.pulse_energy_j = pulse_energy_j;
  p.repetition_rate_hz = repetition_rate_hz;
  p.convention = convention;
  p.pulse_duration_s = crossing_time(p);
  return p;
}

double GaussianProbe::gaussian_exponent() const {
  require_positive(sigma_m, "probe sigma");
  const double s2 = sigma_m * sigma_m;
  return convention == SigmaConvention::Amplitude ? 1.0 / (2.0 * s2) : 1.0 / (4.0 * s2);
}

void GaussianProbe::validate() const {
  require_positive(sigma_m, "probe sigma");
  require_positive(wavelength_m, "probe wavelength");
  require_positive(pulse_energy_j, "probe pulse energy");
  require_positive(repetition_rate_hz, "probe repetition rate");
  require_positive(pulse_duration_s, "probe pulse duration");
  require_positive(amplitude_scale, "probe amplitude scale");
}

void TargetPulse::validate() const {
  require_positive(pulse_energy_j, "target pulse energy");
  require_positive(duration_s, "target duration");
  require_positive(focus_half_height_m, "target focus half height");
  require_positive(wavelength_m, "target wavelength");
  require_positive(repetition_rate_hz, "target repetition rate");
}

void PhaseRegion::validate() const {
  require_positive(half_width_m, "phase region half width");
  require_positive(half_height_m, "phase region half height");
  if (!std::isfinite(delta_rad)) throw DomainError("phase shift must be finite");
}

double accumulated_phase_shift(double dn, double probe_wavelength_m,
                               double interaction_length_m) {
  if (!(dn >= 0.0)) throw DomainError("index shift must be non-negative");
  require_positive(probe_wavelength_m, "probe wavelength");
  require_positive(interaction_length_m, "interaction length");
  return 2.0 * constants::pi / probe_wavelength_m * dn * interaction_length_m;
}

EnergyDensity target_energy_density(const TargetPulse& target) {
  target.validate();
  const double length_um = constants::speed_of_light * target.duration_s * 1e6;
  const double radius_um = target.focus_half_height_m * 1e6;
  const double volume_um3 = length_um * constants::pi * radius_um * radius_um;
  return EnergyDensity::from_joule_per_um3(target.pulse_energy_j / volume_um3);
}

double target_intensity_w_cm2(const TargetPulse& target) {
  target.validate();
  const double radius_cm = target.focus_half_height_m * 1e2;
  return target.pulse_energy_j / (target.duration_s * constants::pi * radius_cm * radius_cm);
}

double crossing_time(const GaussianProbe& probe) {
  if (!(probe.sigma_m >= 0.0)) throw DomainError("probe sigma must be non-negative");
  return 2.0 * probe.sigma_m / constants::speed_of_light;
}

std::complex<double> synthesized_amplitude(double x0, double y0,
                                           const GaussianProbe& probe,
                                           const PhaseRegion& region) {
  const double envelope =
      probe.amplitude_scale * std::exp(-probe.gaussian_exponent() * (x0 * x0 + y0 * y0));
  if (rect(x0, y0, region) != 0.0) return envelope * std::polar(1.0, region.delta_rad);
  return {envelope, 0.0};
}

Eigen::ArrayXXcd sample_exit_field(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys,
                                   const GaussianProbe& probe, const PhaseRegion& region) {
  Eigen::ArrayXXcd field(xs.size(), ys.size());
  for (Eigen::Index j = 0; j < ys.size(); ++j) {
    for (Eigen::Index i = 0; i < xs.size(); ++i) {
      field(i, j) = synthesized_amplitude(xs[i], ys[j], probe, region);
    }
  }
  return field;
}

}  // namespace vacdiff
