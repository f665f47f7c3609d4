#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <random>

#include "vacdiff/errors.hpp"
#include "vacdiff/vacuum.hpp"

using namespace vacdiff;
using Eigen::Vector3d;

namespace {

CrossedFieldTarget target_along_x(double jpum3) {
  return {EnergyDensity::from_joule_per_um3(jpum3), Vector3d::UnitX(), Vector3d::UnitY()};
}

Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vector3d v(n(rng), n(rng), n(rng));
  return v.normalized();
}

// alpha^2 / m_e^4 from CODATA values, GeV^-4.
constexpr double kQed = (7.2973525693e-3 * 7.2973525693e-3) /
                        (0.51099895e-3 * 0.51099895e-3 * 0.51099895e-3 * 0.51099895e-3);

}  // namespace

TEST_CASE("qed coupling") {
  CHECK(qed_coupling_gev4() == doctest::Approx(kQed).epsilon(1e-14));
  CHECK(qed_coupling_gev4() == doctest::Approx(7.81e8).epsilon(2e-3));
}

TEST_CASE("index shift at 1 J/um^3, orthogonal crossing") {
  const auto t = target_along_x(1.0);
  const double perp = refractive_index_shift(ProbePolarization::Perpendicular, t, Vector3d::UnitZ());
  const double par = refractive_index_shift(ProbePolarization::Parallel, t, Vector3d::UnitZ());
  CHECK(perp == doctest::Approx(1.165e-11).epsilon(2e-3));
  CHECK(par == doctest::Approx(6.66e-12).epsilon(2e-3));
  CHECK(phase_velocity(ProbePolarization::Perpendicular, t, Vector3d::UnitZ()) ==
        doctest::Approx(1.0 - perp).epsilon(1e-15));
}

TEST_CASE("perpendicular over parallel is 7/4 for random targets") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> exponent(-6.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    Vector3d n = random_unit(rng);
    Vector3d e = n.unitOrthogonal();
    CrossedFieldTarget t(EnergyDensity::from_joule_per_um3(std::pow(10.0, exponent(rng))), n, e);
    Vector3d k = random_unit(rng);
    if (1.0 + k.dot(n) < 1e-3) continue;
    const double r = refractive_index_shift(ProbePolarization::Perpendicular, t, k) /
                     refractive_index_shift(ProbePolarization::Parallel, t, k);
    CHECK(std::abs(r / 1.75 - 1.0) < 1e-12);
  }
}

TEST_CASE("quadratic in 1 + k.n") {
  const auto t = target_along_x(0.3);
  const double side = refractive_index_shift(ProbePolarization::Parallel, t, Vector3d::UnitZ());
  const double along = refractive_index_shift(ProbePolarization::Parallel, t, Vector3d::UnitX());
  const double against = refractive_index_shift(ProbePolarization::Parallel, t, -Vector3d::UnitX());
  CHECK(along == doctest::Approx(4.0 * side).epsilon(1e-14));
  CHECK(against == 0.0);
}

TEST_CASE("target and probe validation") {
  const auto rho = EnergyDensity::from_joule_per_um3(1.0);
  CHECK_THROWS_AS(CrossedFieldTarget(rho, Vector3d(1.0, 0.1, 0.0), Vector3d::UnitY()), DomainError);
  CHECK_THROWS_AS(CrossedFieldTarget(rho, Vector3d::UnitX(), Vector3d::UnitX()), DomainError);
  const auto t = target_along_x(1.0);
  CHECK_THROWS_AS(refractive_index_shift(ProbePolarization::Parallel, t, Vector3d(0, 0, 2)),
                  DomainError);
}

TEST_CASE("hidden fields act in one channel") {
  const auto t = target_along_x(1.0);
  const Vector3d k = Vector3d::UnitZ();
  const HiddenScalar s{1e-6, 1e-3};
  const HiddenPseudoscalar p{1e-6, 1e-3};
  const double extra = (1e-6 / 1e-12) * (1e-6 / 1e-12);
  CHECK(effective_coupling_gev4(s, ProbePolarization::Parallel) ==
        doctest::Approx(kQed + extra).epsilon(1e-14));
  CHECK(effective_coupling_gev4(s, ProbePolarization::Perpendicular) ==
        doctest::Approx(kQed).epsilon(1e-14));
  CHECK(effective_coupling_gev4(p, ProbePolarization::Perpendicular) ==
        doctest::Approx(kQed + extra).epsilon(1e-14));
  CHECK(effective_coupling_gev4(p, ProbePolarization::Parallel) ==
        doctest::Approx(kQed).epsilon(1e-14));
  CHECK(refractive_index_shift(ProbePolarization::Parallel, t, k, s) >
        refractive_index_shift(ProbePolarization::Parallel, t, k));
  CHECK_THROWS_AS(validate(HiddenScalar{0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(validate(HiddenPseudoscalar{1.0, -1.0}), DomainError);
}

TEST_CASE("coupling reach") {
  CHECK(g_reach(1e-3) == doctest::Approx(1e-12 * std::sqrt(kQed)).epsilon(1e-14));
  CHECK(g_reach(1e-3) == doctest::Approx(2.79e-8).epsilon(2e-3));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> exponent(-6.0, 2.0);
  const double slope = g_reach(1.0);
  for (int i = 0; i < 100; ++i) {
    const double m = std::pow(10.0, exponent(rng));
    CHECK(g_reach(m) / m == doctest::Approx(slope).epsilon(1e-14));
  }
  CHECK(g_reach(1e-3, 14.0 / 45.0) == doctest::Approx(g_reach(1e-3) * std::sqrt(14.0 / 45.0)));
  CHECK_THROWS_AS(g_reach(0.0), DomainError);
}

TEST_CASE("plasma quantities") {
  PlasmaState p;
  p.laser_wavelength_um = 0.8;
  CHECK(critical_density(0.8) == doctest::Approx(1.75e21).epsilon(1e-12));
  // eps0 m_e (2 pi c / lambda)^2 / e^2 at 800 nm.
  const double w0 = 2.0 * M_PI * 299792458.0 / 0.8e-6;
  const double ncr = 8.8541878128e-12 * 9.1093837015e-31 * w0 * w0 /
                     (1.602176634e-19 * 1.602176634e-19) * 1e-6;
  CHECK(critical_density_exact(0.8) == doctest::Approx(ncr).epsilon(1e-13));
  CHECK(critical_density(0.8) / ncr == doctest::Approx(1.005).epsilon(2e-3));

  p.laser_intensity_w_cm2 = 1e18;
  CHECK(normalized_vector_potential(p) == doctest::Approx(0.68).epsilon(1e-12));
  CHECK(relativistic_gamma(p) == doctest::Approx(std::sqrt(1.0 + 0.68 * 0.68)).epsilon(1e-14));

  p.laser_intensity_w_cm2 = 0.0;
  p.electron_density_cm3 = ncr;
  CHECK(plasma_refractive_index(p) == 0.0);
  CHECK(plasma_frequency(ncr) == doctest::Approx(w0).epsilon(1e-13));
  p.electron_density_cm3 = 1.01 * ncr;
  CHECK_THROWS_AS(plasma_refractive_index(p), OverdenseError);
  CHECK_THROWS_AS(plasma_index_shift(p), OverdenseError);
  p.electron_density_cm3 = 0.0;
  CHECK(plasma_refractive_index(p) == 1.0);
  p.electron_density_cm3 = -1.0;
  CHECK_THROWS_AS(plasma_index_shift(p), DomainError);
}

TEST_CASE("small-density expansion matches exact index") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> exponent(-12.0, -6.0);
  PlasmaState p;
  for (int i = 0; i < 200; ++i) {
    const double ratio = std::pow(10.0, exponent(rng));  // (omega_p/omega0)^2 < 1e-6
    p.electron_density_cm3 = ratio * critical_density_exact(p.laser_wavelength_um);
    // 1 - sqrt(1 - r) computed without cancellation.
    const double exact = ratio / (1.0 + std::sqrt(1.0 - ratio));
    CHECK(std::abs(plasma_index_shift(p) / exact - 1.0) < 1e-6);
    // Direct subtraction is only meaningful while 1 - n is far above round-off.
    if (ratio > 1e-9) {
      CHECK(std::abs(plasma_index_shift(p) / (1.0 - plasma_refractive_index(p)) - 1.0) < 1e-6);
    }
  }
}

TEST_CASE("residual gas at 1e-6 Pa") {
  const double n = pressure_to_electron_density(1e-6, 293.0);
  CHECK(n == doctest::Approx(1e-6 / (1.380649e-23 * 293.0) * 1e-6).epsilon(1e-14));
  CHECK(n == doctest::Approx(2.47e8).epsilon(3e-3));
  CHECK(pressure_to_electron_density(2e-6, 293.0) == doctest::Approx(2.0 * n).epsilon(1e-15));
  CHECK(pressure_to_electron_density(1e-6, 293.0, 0.0) == 0.0);
  PlasmaState p{n, 0.8, 0.0};
  CHECK(plasma_index_shift(p) == doctest::Approx(7.06e-14).epsilon(5e-3));
  CHECK_THROWS_AS(pressure_to_electron_density(0.0, 293.0), DomainError);
  CHECK_THROWS_AS(pressure_to_electron_density(1e-6, 293.0, -1.0), DomainError);
}
