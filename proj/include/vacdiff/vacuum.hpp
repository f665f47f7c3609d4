#pragma once

// Refractive index of the vacuum under a strong crossed-field laser target
// (QED one-loop and hidden scalar/pseudoscalar exchange) and of the residual
// gas plasma created along the target path.

#include <Eigen/Core>
#include <variant>

#include "vacdiff/units.hpp"

namespace vacdiff {

/// Crossed-field target: |E| = |B| = eps, n = B x E.
class CrossedFieldTarget {
 public:
  /// Throws DomainError unless both vectors are unit length and orthogonal.
  CrossedFieldTarget(EnergyDensity energy_density,
                     const Eigen::Vector3d& propagation,
                     const Eigen::Vector3d& polarization);

  const EnergyDensity& energy_density() const noexcept { return density_; }
  const Eigen::Vector3d& propagation() const noexcept { return n_; }
  const Eigen::Vector3d& polarization() const noexcept { return e_; }

 private:
  EnergyDensity density_;
  Eigen::Vector3d n_;
  Eigen::Vector3d e_;
};

enum class ProbePolarization { Parallel, Perpendicular };

struct QedVacuum {};

/// Light scalar coupled to two photons; acts in the parallel channel.
struct HiddenScalar {
  double coupling_gev_inv;
  double mass_ev;
};

/// Light pseudoscalar coupled to two photons; acts in the perpendicular
/// channel.
struct HiddenPseudoscalar {
  double coupling_gev_inv;
  double mass_ev;
};

using VacuumModel = std::variant<QedVacuum, HiddenScalar, HiddenPseudoscalar>;

/// Throws DomainError when a hidden-field variant has g <= 0 or mass <= 0.
void validate(const VacuumModel& model);

/// 8/45 for Parallel, 14/45 for Perpendicular.
double channel_coefficient(ProbePolarization pol) noexcept;

/// alpha^2 / m_e^4 in GeV^-4.
double qed_coupling_gev4() noexcept;

/// Effective quartic coupling (GeV^-4) seen by a probe in channel `pol`.
/// QED always contributes alpha^2/m_e^4; a hidden field adds (g/m)^2 in the
/// channel it couples to.
double effective_coupling_gev4(const VacuumModel& model, ProbePolarization pol);

/// Index change n - 1 for a probe moving along `probe_direction`.
double refractive_index_shift(ProbePolarization pol,
                              const CrossedFieldTarget& target,
                              const Eigen::Vector3d& probe_direction,
                              const VacuumModel& model = QedVacuum{});

/// Phase velocity in units of c, 1 - refractive_index_shift.
double phase_velocity(ProbePolarization pol, const CrossedFieldTarget& target,
                      const Eigen::Vector3d& probe_direction,
                      const VacuumModel& model = QedVacuum{});

/// Coupling (GeV^-1) at which a hidden field of mass `mass_ev` reproduces the
/// QED quartic coupling: g = m * sqrt(geometry_factor * alpha^2 / m_e^4).
double g_reach(double mass_ev, double geometry_factor = 1.0);

struct PlasmaState {
  double electron_density_cm3 = 0.0;
  double laser_wavelength_um = 0.8;
  double laser_intensity_w_cm2 = 0.0;
};

/// Normalized vector potential, 0.85e-9 * lambda[um] * sqrt(I[W/cm^2]).
double normalized_vector_potential(const PlasmaState& p);
double relativistic_gamma(const PlasmaState& p);

/// Plasma angular frequency sqrt(e^2 n_e / (m_e eps0)) in rad/s.
double plasma_frequency(double electron_density_cm3);
double laser_angular_frequency(double wavelength_um);

/// Engineering formula 1.12e21 / lambda[um]^2 (cm^-3).
double critical_density(double wavelength_um);
/// eps0 m_e omega0^2 / e^2 (cm^-3); the density at which omega_p = omega0.
double critical_density_exact(double wavelength_um);

/// sqrt(1 - omega_p^2/(gamma omega0^2)); throws OverdenseError when the
/// radicand is negative.
double plasma_refractive_index(const PlasmaState& p);

/// omega_p^2 / (2 gamma omega0^2), the low-density index decrement.
double plasma_index_shift(const PlasmaState& p);

/// Ideal-gas electron density in cm^-3. The ionization multiplicity is an
/// explicit input; one electron per molecule is the usual assumption.
double pressure_to_electron_density(double pressure_pa, double temperature_k,
                                    double electrons_per_molecule = 1.0);

}  // namespace vacdiff
