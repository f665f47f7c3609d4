#pragma once

// Electron-laser crossing kinematics: the Unruh temperature of an electron
// accelerated by a laser field, its Doppler-shifted lab-frame energy, the
// Compton end point, and a classical Lorentz-force pusher with Larmor
// radiation for the conventional background.

#include <Eigen/Core>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vacdiff {

/// k_B T = hbar a / (2 pi c), in eV. Throws DomainError for a < 0.
double unruh_temperature_ev(double proper_acceleration);

/// e E / m_e, the rest-frame acceleration in a field E (V/m).
double acceleration_from_field(double e_field_v_per_m);

/// Forward Doppler shift gamma (1 + beta) E_rest. Throws DomainError for
/// gamma < 1.
double lab_frame_energy(double rest_frame_energy_ev, double gamma);

struct ElectronBeam {
  /// Total energy (rest energy included).
  double energy_mev = 35.4;
  double bunch_charge_nc = 1.0;

  void validate() const;
  double gamma() const;
  double beta() const;
  /// |p| in kg m/s.
  double momentum() const;
};

struct LaserField {
  double intensity_w_cm2 = 1e17;
  double wavelength_nm = 800.0;

  void validate() const;
  /// Peak field sqrt(2 I / (c eps0)), V/m.
  double peak_field() const;
  double photon_energy_ev() const;
  double angular_frequency() const;
  /// Normalized vector potential e E / (m_e c omega).
  double a0() const;
};

/// Largest scattered photon energy in keV from exact two-body kinematics.
/// `crossing_angle` is the angle between the electron velocity and the laser
/// photon direction: pi is head-on. Throws DomainError outside (0, pi].
double compton_endpoint_kev(const ElectronBeam& beam, const LaserField& laser, double crossing_angle);

/// Same end point without electron recoil,
/// E_L gamma^2 (1 + beta)(1 - beta cos angle); 2 gamma^2 E_L at 90 degrees.
double thomson_endpoint_kev(const ElectronBeam& beam, const LaserField& laser, double crossing_angle);

struct FieldSample {
  Eigen::Vector3d e = Eigen::Vector3d::Zero();  ///< V/m
  Eigen::Vector3d b = Eigen::Vector3d::Zero();  ///< T
};

using FieldFunction = std::function<FieldSample(double t, const Eigen::Vector3d& x)>;

/// Linearly polarized plane-wave pulse with a sin^2 envelope spanning
/// `cycles` optical periods. The phase is eta = omega t - k khat.x - omega
/// delay_s; the field is E0 sin^2(eta / 2N) sin(eta) ehat for 0 <= eta <= 2 pi
/// N and zero elsewhere, with B = khat x E / c.
struct PlaneWavePulse {
  LaserField laser;
  int cycles = 10;
  Eigen::Vector3d direction = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d polarization = Eigen::Vector3d::UnitX();
  /// Time at which the leading edge crosses the origin.
  double delay_s = 0.0;

  void validate() const;
  double phase(double t, const Eigen::Vector3d& x) const;
  FieldSample field(double t, const Eigen::Vector3d& x) const;
  /// Vector potential with E = -dA/dt, vanishing ahead of and behind the pulse.
  Eigen::Vector3d vector_potential(double t, const Eigen::Vector3d& x) const;
  double period() const;
  double duration() const { return cycles * period(); }
};

struct ElectronState {
  double t = 0.0;
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  /// Momentum, kg m/s.
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
};

/// Leapfrog samples: x[n] at t[n], p[n] at t[n] - dt/2, so that
/// x[n] - x[n-1] = dt v(p[n]). Sample 0 holds the initial state.
struct Trajectory {
  std::vector<double> t;
  std::vector<Eigen::Vector3d> x;
  std::vector<Eigen::Vector3d> p;
  double dt = 0.0;
  int steps = 0;
  /// Shortest field period the step was checked against.
  double resolved_period = 0.0;
  std::string integrator = "boris";

  std::size_t size() const { return t.size(); }
  /// Lorentz factor of p[i].
  double gamma(std::size_t i) const;
  /// Velocity of p[i].
  Eigen::Vector3d velocity(std::size_t i) const;
  /// (p[i] + p[i+1]) / 2, the momentum at t[i]; i < size - 1.
  Eigen::Vector3d momentum_at_position(std::size_t i) const;
};

inline constexpr int kMinStepsPerPeriod = 64;

/// Relativistic Boris integration of dp/dt = -e (E + v x B) over `steps`
/// steps. `period` is the shortest time scale of the field; dt must not
/// exceed period / 64. initial.p is the momentum half a step before
/// initial.t. Throws ResolutionError for a coarse step and DomainError for
/// steps < 1.
Trajectory push_electron(const ElectronState& initial, const FieldFunction& field, double period, double dt,
                         int steps);

Trajectory push_electron(const ElectronState& initial, const PlaneWavePulse& pulse, double dt, int steps);

/// Relativistic Larmor power e^2 gamma^6 (a^2 - |v x a|^2 / c^2) / (6 pi eps0
/// c^3) at each t[n], from the centred difference of p[n] and p[n+1]. The
/// final entry, which has no forward half step, is zero.
std::vector<double> larmor_power(const Trajectory& traj);

/// Characteristic photon energy hbar (3/2) gamma^3 |a_perp| / c at the
/// sample of peak Larmor power, eV.
double characteristic_energy_ev(const Trajectory& traj);

struct VisibleYield {
  double radiated_energy_j = 0.0;
  double band_fraction = 0.0;
  double acceptance_fraction = 0.0;
  double cutoff_energy_ev = 0.0;
  double photons = 0.0;
};

/// Order-of-magnitude photon count per electron in [lambda_min, lambda_max].
/// The spectrum is taken flat in photon energy up to the cutoff (the
/// characteristic energy unless given), and the light is beamed into a cone
/// of solid angle pi / gamma^2 about the motion, of which the collector sees
/// min(1, solid_angle gamma^2 / pi). Throws ResolutionError for a trajectory
/// stepped coarser than period / 64.
VisibleYield larmor_visible_yield(const Trajectory& traj, double lambda_min_m, double lambda_max_m,
                                  double collection_solid_angle_sr,
                                  std::optional<double> cutoff_energy_ev = std::nullopt);

/// `t,x,y,z,px,py,pz` rows; momentum at t - dt/2.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace vacdiff
