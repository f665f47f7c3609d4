#pragma once

// Physical constants (CODATA 2018) and the handful of unit conversions the
// simulator needs. External quantities are SI or the mixed units used by
// laser experimentalists (J/um^3, eV, GeV); the vacuum-index formulas are
// evaluated in natural units (hbar = c = 1, GeV).

#include <numbers>

namespace vacdiff {

namespace constants {

inline constexpr double pi = std::numbers::pi;

inline constexpr double fine_structure_alpha = 7.2973525693e-3;
inline constexpr double electron_mass_gev = 0.51099895000e-3;
inline constexpr double electron_mass_kg = 9.1093837015e-31;
inline constexpr double elementary_charge = 1.602176634e-19;   // C
inline constexpr double hbar = 1.054571817e-34;                // J s
inline constexpr double planck_h = 6.62607015e-34;             // J s
inline constexpr double speed_of_light = 299792458.0;          // m/s
inline constexpr double boltzmann = 1.380649e-23;              // J/K
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double hbar_c_gev_fm = 0.1973269804;          // GeV fm

/// m_e c^2 in eV and MeV.
inline constexpr double electron_rest_energy_ev = electron_mass_gev * 1e9;
inline constexpr double electron_rest_energy_mev = electron_mass_gev * 1e3;

/// 1 J in GeV.
inline constexpr double joule_in_gev = 1.0 / (elementary_charge * 1e9);
/// (1 um)^-1 in GeV.
inline constexpr double inverse_micron_in_gev = hbar_c_gev_fm * 1e-9;

}  // namespace constants

/// Energy density, stored in J/um^3.
class EnergyDensity {
 public:
  EnergyDensity() = default;

  /// Throws DomainError for negative or non-finite input.
  static EnergyDensity from_joule_per_um3(double value);
  static EnergyDensity from_gev4(double value);

  double joule_per_um3() const noexcept { return value_; }
  double gev4() const noexcept;

  friend bool operator==(const EnergyDensity&, const EnergyDensity&) = default;

 private:
  explicit EnergyDensity(double v) : value_(v) {}
  double value_ = 0.0;
};

/// Energy density in J/um^3 expressed in GeV^4.
double jpum3_to_gev4(double joule_per_um3);
double gev4_to_jpum3(double gev4);

/// Number of photons of wavelength `wavelength_m` carried by `pulse_energy_j`.
double photons_per_pulse(double pulse_energy_j, double wavelength_m);

double photon_energy_j(double wavelength_m);
double photon_energy_ev(double wavelength_m);

}  // namespace vacdiff
