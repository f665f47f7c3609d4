#include "vacdiff/horizon.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <ostream>

#include "vacdiff/errors.hpp"
#include "vacdiff/format.hpp"
#include "vacdiff/units.hpp"

namespace vacdiff {

namespace {

using namespace constants;

constexpr double kMc = electron_mass_kg * speed_of_light;

double beta_from_gamma(double gamma) { return std::sqrt((gamma - 1.0) * (gamma + 1.0)) / gamma; }

double gamma_of(const Eigen::Vector3d& u) { return std::sqrt(1.0 + u.squaredNorm()); }

void check_angle(double angle) {
  if (!(angle > 0.0) || !(angle <= pi)) throw DomainError("crossing angle must lie in (0, pi]");
}

// int_0^eta sin^2(s / 2N) sin(s) ds.
double envelope_integral(double eta, int cycles) {
  const double a = 1.0 / cycles;
  double r = 0.5 * (1.0 - std::cos(eta)) - 0.25 * (1.0 - std::cos((1.0 + a) * eta)) / (1.0 + a);
  if (cycles > 1) r -= 0.25 * (1.0 - std::cos((1.0 - a) * eta)) / (1.0 - a);
  return r;
}

}  // namespace

double unruh_temperature_ev(double proper_acceleration) {
  if (!(proper_acceleration >= 0.0)) throw DomainError("acceleration must be non-negative");
  return hbar * proper_acceleration / (2.0 * pi * speed_of_light) / elementary_charge;
}

double acceleration_from_field(double e_field_v_per_m) {
  if (!(e_field_v_per_m >= 0.0)) throw DomainError("field strength must be non-negative");
  return elementary_charge * e_field_v_per_m / electron_mass_kg;
}

double lab_frame_energy(double rest_frame_energy_ev, double gamma) {
  if (!(gamma >= 1.0)) throw DomainError("gamma must be at least 1");
  return gamma * (1.0 + beta_from_gamma(gamma)) * rest_frame_energy_ev;
}

void ElectronBeam::validate() const {
  if (!(energy_mev > electron_rest_energy_mev) || !std::isfinite(energy_mev)) {
    throw DomainError("beam energy must exceed the electron rest energy");
  }
  if (!(bunch_charge_nc > 0.0)) throw DomainError("bunch charge must be positive");
}

double ElectronBeam::gamma() const {
  validate();
  return energy_mev / electron_rest_energy_mev;
}

double ElectronBeam::beta() const { return beta_from_gamma(gamma()); }

double ElectronBeam::momentum() const {
  const double g = gamma();
  return g * beta_from_gamma(g) * kMc;
}

void LaserField::validate() const {
  if (!(intensity_w_cm2 >= 0.0) || !std::isfinite(intensity_w_cm2)) {
    throw DomainError("laser intensity must be non-negative");
  }
  if (!(wavelength_nm > 0.0) || !std::isfinite(wavelength_nm)) {
    throw DomainError("laser wavelength must be positive");
  }
}

double LaserField::peak_field() const {
  validate();
  return std::sqrt(2.0 * intensity_w_cm2 * 1e4 / (speed_of_light * vacuum_permittivity));
}

double LaserField::photon_energy_ev() const {
  validate();
  return vacdiff::photon_energy_ev(wavelength_nm * 1e-9);
}

double LaserField::angular_frequency() const {
  validate();
  return 2.0 * pi * speed_of_light / (wavelength_nm * 1e-9);
}

double LaserField::a0() const {
  return elementary_charge * peak_field() / (kMc * angular_frequency());
}

double compton_endpoint_kev(const ElectronBeam& beam, const LaserField& laser, double crossing_angle) {
  check_angle(crossing_angle);
  const double g = beam.gamma();
  const double b = beta_from_gamma(g);
  const double el = laser.photon_energy_ev();
  const double eps = el / (beam.energy_mev * 1e6);
  const double c = std::cos(crossing_angle);
  const double n = 1.0 - b * c;
  // Smallest 1 - beta cos(theta_out) + eps (1 - cos(angle between photons))
  // over outgoing directions, written without cancellation.
  const double root = std::sqrt(b * b + 2.0 * b * eps * c + eps * eps);
  const double d = (1.0 / (g * g) + 2.0 * eps * n) / (1.0 + eps + root);
  return el * n / d * 1e-3;
}

double thomson_endpoint_kev(const ElectronBeam& beam, const LaserField& laser, double crossing_angle) {
  check_angle(crossing_angle);
  const double g = beam.gamma();
  const double b = beta_from_gamma(g);
  return laser.photon_energy_ev() * g * g * (1.0 + b) * (1.0 - b * std::cos(crossing_angle)) * 1e-3;
}

void PlaneWavePulse::validate() const {
  laser.validate();
  if (cycles < 1) throw DomainError("pulse needs at least one cycle");
  if (std::abs(direction.norm() - 1.0) > 1e-12 || std::abs(polarization.norm() - 1.0) > 1e-12) {
    throw DomainError("pulse direction and polarization must be unit vectors");
  }
  if (std::abs(direction.dot(polarization)) > 1e-12) {
    throw DomainError("pulse polarization must be transverse");
  }
}

double PlaneWavePulse::period() const { return 2.0 * pi / laser.angular_frequency(); }

double PlaneWavePulse::phase(double t, const Eigen::Vector3d& x) const {
  const double w = laser.angular_frequency();
  return w * (t - delay_s) - w / speed_of_light * direction.dot(x);
}

FieldSample PlaneWavePulse::field(double t, const Eigen::Vector3d& x) const {
  FieldSample f;
  const double eta = phase(t, x);
  if (eta <= 0.0 || eta >= 2.0 * pi * cycles) return f;
  const double env = std::sin(eta / (2.0 * cycles));
  f.e = laser.peak_field() * env * env * std::sin(eta) * polarization;
  f.b = direction.cross(f.e) / speed_of_light;
  return f;
}

Eigen::Vector3d PlaneWavePulse::vector_potential(double t, const Eigen::Vector3d& x) const {
  const double eta = std::clamp(phase(t, x), 0.0, 2.0 * pi * cycles);
  return -laser.peak_field() / laser.angular_frequency() * envelope_integral(eta, cycles) * polarization;
}

double Trajectory::gamma(std::size_t i) const { return gamma_of(p[i] / kMc); }

Eigen::Vector3d Trajectory::velocity(std::size_t i) const {
  const Eigen::Vector3d u = p[i] / kMc;
  return speed_of_light * u / gamma_of(u);
}

Eigen::Vector3d Trajectory::momentum_at_position(std::size_t i) const { return 0.5 * (p[i] + p[i + 1]); }

Trajectory push_electron(const ElectronState& initial, const FieldFunction& field, double period, double dt,
                         int steps) {
  if (steps < 1) throw DomainError("push needs at least one step");
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (!(period > 0.0)) throw DomainError("field period must be positive");
  if (dt * kMinStepsPerPeriod > period * (1.0 + 1e-12)) {
    throw ResolutionError("time step resolves the field period with fewer than 64 steps");
  }
  Trajectory traj;
  traj.dt = dt;
  traj.steps = steps;
  traj.resolved_period = period;
  const auto n = static_cast<std::size_t>(steps) + 1;
  traj.t.reserve(n);
  traj.x.reserve(n);
  traj.p.reserve(n);

  // Dimensionless momentum u = p / (m c); q / m = -e / m.
  const double kick = -elementary_charge * dt / (2.0 * kMc);  // per V/m
  const double turn = -elementary_charge * dt / (2.0 * electron_mass_kg);  // per T, before 1/gamma
  Eigen::Vector3d x = initial.x;
  Eigen::Vector3d u = initial.p / kMc;
  traj.t.push_back(initial.t);
  traj.x.push_back(x);
  traj.p.push_back(initial.p);
  for (int k = 0; k < steps; ++k) {
    const double t = initial.t + k * dt;
    const FieldSample f = field(t, x);
    const Eigen::Vector3d minus = u + kick * f.e;
    const Eigen::Vector3d tv = turn / gamma_of(minus) * f.b;
    const Eigen::Vector3d sv = 2.0 / (1.0 + tv.squaredNorm()) * tv;
    const Eigen::Vector3d prime = minus + minus.cross(tv);
    const Eigen::Vector3d plus = minus + prime.cross(sv);
    u = plus + kick * f.e;
    x += dt * speed_of_light / gamma_of(u) * u;
    traj.t.push_back(initial.t + (k + 1) * dt);
    traj.x.push_back(x);
    traj.p.push_back(u * kMc);
  }
  return traj;
}

Trajectory push_electron(const ElectronState& initial, const PlaneWavePulse& pulse, double dt, int steps) {
  pulse.validate();
  return push_electron(
      initial, [&pulse](double t, const Eigen::Vector3d& x) { return pulse.field(t, x); }, pulse.period(), dt,
      steps);
}

std::vector<double> larmor_power(const Trajectory& traj) {
  std::vector<double> power(traj.size(), 0.0);
  if (traj.size() < 2) return power;
  const double c = speed_of_light;
  const double k = elementary_charge * elementary_charge / (6.0 * pi * vacuum_permittivity * c * c * c);
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    const Eigen::Vector3d a = (traj.velocity(i + 1) - traj.velocity(i)) / traj.dt;
    const Eigen::Vector3d u = traj.momentum_at_position(i) / kMc;
    const double g = gamma_of(u);
    const Eigen::Vector3d v = c * u / g;
    const double g2 = g * g;
    const double bracket = a.squaredNorm() - v.cross(a).squaredNorm() / (c * c);
    power[i] = k * g2 * g2 * g2 * std::max(0.0, bracket);
  }
  return power;
}

double characteristic_energy_ev(const Trajectory& traj) {
  const std::vector<double> power = larmor_power(traj);
  if (power.empty()) return 0.0;
  const auto i = static_cast<std::size_t>(std::max_element(power.begin(), power.end()) - power.begin());
  if (power[i] == 0.0 || i + 1 >= traj.size()) return 0.0;
  const Eigen::Vector3d a = (traj.velocity(i + 1) - traj.velocity(i)) / traj.dt;
  const Eigen::Vector3d u = traj.momentum_at_position(i) / kMc;
  const double g = gamma_of(u);
  const double speed = u.norm();
  const double a_perp = speed > 0.0 ? u.cross(a).norm() / speed : a.norm();
  const double omega_c = 1.5 * g * g * g * a_perp / speed_of_light;
  return hbar * omega_c / elementary_charge;
}

VisibleYield larmor_visible_yield(const Trajectory& traj, double lambda_min_m, double lambda_max_m,
                                  double collection_solid_angle_sr, std::optional<double> cutoff_energy_ev) {
  if (traj.size() < 2 || !(traj.dt > 0.0)) throw DomainError("trajectory has no steps");
  if (!(traj.resolved_period > 0.0) || traj.dt * kMinStepsPerPeriod > traj.resolved_period * (1.0 + 1e-12)) {
    throw ResolutionError("trajectory resolves the field period with fewer than 64 steps");
  }
  if (!(lambda_min_m > 0.0) || !(lambda_max_m > lambda_min_m)) {
    throw DomainError("band needs 0 < lambda_min < lambda_max");
  }
  if (!(collection_solid_angle_sr > 0.0) || collection_solid_angle_sr > 4.0 * pi) {
    throw DomainError("solid angle must lie in (0, 4 pi]");
  }
  if (cutoff_energy_ev && !(*cutoff_energy_ev > 0.0)) throw DomainError("cutoff energy must be positive");

  VisibleYield y;
  for (double p : larmor_power(traj)) y.radiated_energy_j += p * traj.dt;
  y.cutoff_energy_ev = cutoff_energy_ev ? *cutoff_energy_ev : characteristic_energy_ev(traj);

  const double e_lo = photon_energy_ev(lambda_max_m);
  const double e_hi = std::min(photon_energy_ev(lambda_min_m), y.cutoff_energy_ev);
  double gamma_sum = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) gamma_sum += traj.gamma(i);
  const double g = gamma_sum / static_cast<double>(traj.size());
  y.acceptance_fraction = std::min(1.0, collection_solid_angle_sr * g * g / pi);
  if (y.cutoff_energy_ev > 0.0 && e_hi > e_lo) {
    y.band_fraction = (e_hi - e_lo) / y.cutoff_energy_ev;
    const double mean_photon_j = 0.5 * (e_lo + e_hi) * elementary_charge;
    y.photons = y.radiated_energy_j * y.band_fraction / mean_photon_j * y.acceptance_fraction;
  }
  return y;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,x,y,z,px,py,pz\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << format_sci(traj.t[i]);
    for (int k = 0; k < 3; ++k) out << ',' << format_sci(traj.x[i][k]);
    for (int k = 0; k < 3; ++k) out << ',' << format_sci(traj.p[i][k]);
    out << '\n';
  }
}

}  // namespace vacdiff
