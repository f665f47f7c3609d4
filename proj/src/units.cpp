#include "vacdiff/units.hpp"

#include <cmath>
#include <string>

#include "vacdiff/errors.hpp"

namespace vacdiff {

namespace {

constexpr double kJpum3ToGev4 = constants::joule_in_gev *
                                constants::inverse_micron_in_gev *
                                constants::inverse_micron_in_gev *
                                constants::inverse_micron_in_gev;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

EnergyDensity EnergyDensity::from_joule_per_um3(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw DomainError("energy density must be non-negative and finite");
  }
  return EnergyDensity(value);
}

EnergyDensity EnergyDensity::from_gev4(double value) {
  return from_joule_per_um3(gev4_to_jpum3(value));
}

double EnergyDensity::gev4() const noexcept { return value_ * kJpum3ToGev4; }

double jpum3_to_gev4(double joule_per_um3) {
  return EnergyDensity::from_joule_per_um3(joule_per_um3).gev4();
}

double gev4_to_jpum3(double gev4) {
  if (!(gev4 >= 0.0) || !std::isfinite(gev4)) {
    throw DomainError("energy density must be non-negative and finite");
  }
  return gev4 / kJpum3ToGev4;
}

double photon_energy_j(double wavelength_m) {
  require_positive(wavelength_m, "wavelength");
  return constants::planck_h * constants::speed_of_light / wavelength_m;
}

double photon_energy_ev(double wavelength_m) {
  return photon_energy_j(wavelength_m) / constants::elementary_charge;
}

double photons_per_pulse(double pulse_energy_j, double wavelength_m) {
  require_positive(pulse_energy_j, "pulse energy");
  return pulse_energy_j / photon_energy_j(wavelength_m);
}

}  // namespace vacdiff
