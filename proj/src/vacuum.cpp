#include "vacdiff/vacuum.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "vacdiff/errors.hpp"

namespace vacdiff {

namespace {

constexpr double kUnitTolerance = 1e-12;

bool is_unit(const Eigen::Vector3d& v) {
  return v.allFinite() && std::abs(v.norm() - 1.0) <= kUnitTolerance;
}

template <typename Hidden>
void validate_hidden(const Hidden& h) {
  if (!(h.coupling_gev_inv > 0.0) || !(h.mass_ev > 0.0)) {
    throw DomainError("hidden-field coupling and mass must be positive");
  }
}

}  // namespace

CrossedFieldTarget::CrossedFieldTarget(EnergyDensity energy_density,
                                       const Eigen::Vector3d& propagation,
                                       const Eigen::Vector3d& polarization)
    : density_(energy_density), n_(propagation), e_(polarization) {
  if (!is_unit(n_) || !is_unit(e_)) {
    throw DomainError("target propagation and polarization must be unit vectors");
  }
  if (std::abs(n_.dot(e_)) > kUnitTolerance) {
    throw DomainError("target propagation and polarization must be orthogonal");
  }
}

void validate(const VacuumModel& model) {
  if (const auto* s = std::get_if<HiddenScalar>(&model)) validate_hidden(*s);
  if (const auto* p = std::get_if<HiddenPseudoscalar>(&model)) validate_hidden(*p);
}

double channel_coefficient(ProbePolarization pol) noexcept {
  return pol == ProbePolarization::Parallel ? 8.0 / 45.0 : 14.0 / 45.0;
}

double qed_coupling_gev4() noexcept {
  constexpr double a = constants::fine_structure_alpha;
  constexpr double m = constants::electron_mass_gev;
  return (a * a) / (m * m * m * m);
}

double effective_coupling_gev4(const VacuumModel& model, ProbePolarization pol) {
  validate(model);
  double coupling = qed_coupling_gev4();
  auto hidden = [](double g, double mass_ev) {
    const double ratio = g / (mass_ev * 1e-9);
    return ratio * ratio;
  };
  if (const auto* s = std::get_if<HiddenScalar>(&model);
      s && pol == ProbePolarization::Parallel) {
    coupling += hidden(s->coupling_gev_inv, s->mass_ev);
  }
  if (const auto* p = std::get_if<HiddenPseudoscalar>(&model);
      p && pol == ProbePolarization::Perpendicular) {
    coupling += hidden(p->coupling_gev_inv, p->mass_ev);
  }
  return coupling;
}

double refractive_index_shift(ProbePolarization pol,
                              const CrossedFieldTarget& target,
                              const Eigen::Vector3d& probe_direction,
                              const VacuumModel& model) {
  if (!is_unit(probe_direction)) {
    throw DomainError("probe direction must be a unit vector");
  }
  const double overlap = 1.0 + probe_direction.dot(target.propagation());
  return channel_coefficient(pol) * effective_coupling_gev4(model, pol) *
         target.energy_density().gev4() * overlap * overlap;
}

double phase_velocity(ProbePolarization pol, const CrossedFieldTarget& target,
                      const Eigen::Vector3d& probe_direction,
                      const VacuumModel& model) {
  return 1.0 - refractive_index_shift(pol, target, probe_direction, model);
}

double g_reach(double mass_ev, double geometry_factor) {
  if (!(mass_ev > 0.0)) throw DomainError("mass must be positive");
  if (!(geometry_factor > 0.0)) throw DomainError("geometry factor must be positive");
  return mass_ev * 1e-9 * std::sqrt(geometry_factor * qed_coupling_gev4());
}

double normalized_vector_potential(const PlasmaState& p) {
  return 0.85e-9 * p.laser_wavelength_um * std::sqrt(p.laser_intensity_w_cm2);
}

double relativistic_gamma(const PlasmaState& p) {
  const double a0 = normalized_vector_potential(p);
  return std::sqrt(1.0 + a0 * a0);
}

double plasma_frequency(double electron_density_cm3) {
  if (!(electron_density_cm3 >= 0.0)) {
    throw DomainError("electron density must be non-negative");
  }
  using namespace constants;
  const double n_m3 = electron_density_cm3 * 1e6;
  return std::sqrt(elementary_charge * elementary_charge * n_m3 /
                   (electron_mass_kg * vacuum_permittivity));
}

double laser_angular_frequency(double wavelength_um) {
  if (!(wavelength_um > 0.0)) throw DomainError("wavelength must be positive");
  return 2.0 * constants::pi * constants::speed_of_light / (wavelength_um * 1e-6);
}

double critical_density(double wavelength_um) {
  if (!(wavelength_um > 0.0)) throw DomainError("wavelength must be positive");
  return 1.12e21 / (wavelength_um * wavelength_um);
}

double critical_density_exact(double wavelength_um) {
  using namespace constants;
  const double w = laser_angular_frequency(wavelength_um);
  const double n_m3 = vacuum_permittivity * electron_mass_kg * w * w /
                      (elementary_charge * elementary_charge);
  return n_m3 * 1e-6;
}

namespace {

// omega_p^2 / (gamma omega0^2) = n_e / (gamma n_cr).
double density_ratio(const PlasmaState& p) {
  if (!(p.electron_density_cm3 >= 0.0) || !(p.laser_intensity_w_cm2 >= 0.0)) {
    throw DomainError("plasma density and intensity must be non-negative");
  }
  const double ratio = p.electron_density_cm3 /
                       (relativistic_gamma(p) * critical_density_exact(p.laser_wavelength_um));
  if (ratio > 1.0) {
    throw OverdenseError("plasma is overdense: omega_p^2/(gamma omega0^2) = " +
                         std::to_string(ratio));
  }
  return ratio;
}

}  // namespace

double plasma_refractive_index(const PlasmaState& p) {
  return std::sqrt(1.0 - density_ratio(p));
}

double plasma_index_shift(const PlasmaState& p) { return 0.5 * density_ratio(p); }

double pressure_to_electron_density(double pressure_pa, double temperature_k,
                                    double electrons_per_molecule) {
  if (!(pressure_pa > 0.0) || !(temperature_k > 0.0)) {
    throw DomainError("pressure and temperature must be positive");
  }
  if (!(electrons_per_molecule >= 0.0)) {
    throw DomainError("electrons per molecule must be non-negative");
  }
  const double molecules_m3 = pressure_pa / (constants::boltzmann * temperature_k);
  return electrons_per_molecule * molecules_m3 * 1e-6;
}

}  // namespace vacdiff
