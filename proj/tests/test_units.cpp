#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "vacdiff/errors.hpp"
#include "vacdiff/units.hpp"

using namespace vacdiff;

namespace {

// 1 J/um^3 in GeV^4 rebuilt from SI constants: J -> GeV via e, and
// 1/um -> GeV via hbar c.
double oracle_jpum3_in_gev4() {
  const double gev_j = 1.602176634e-19 * 1e9;
  const double hbar_c_j_m = 1.054571817e-34 * 299792458.0;
  const double inv_um_gev = hbar_c_j_m / 1e-6 / gev_j;
  return (1.0 / gev_j) * inv_um_gev * inv_um_gev * inv_um_gev;
}

}  // namespace

TEST_CASE("joule per cubic micron to GeV^4") {
  const double oracle = oracle_jpum3_in_gev4();
  CHECK(oracle == doctest::Approx(4.7957e-20).epsilon(1e-4));
  CHECK(jpum3_to_gev4(1.0) == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(EnergyDensity::from_joule_per_um3(2.5).gev4() == doctest::Approx(2.5 * oracle).epsilon(1e-9));
}

TEST_CASE("energy density rejects bad input") {
  CHECK_THROWS_AS(EnergyDensity::from_joule_per_um3(-1.0), DomainError);
  CHECK_THROWS_AS(EnergyDensity::from_joule_per_um3(NAN), DomainError);
  CHECK_THROWS_AS(gev4_to_jpum3(-1.0), DomainError);
  CHECK(EnergyDensity::from_joule_per_um3(0.0).gev4() == 0.0);
}

TEST_CASE("conversion round trip") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> exponent(-12.0, 6.0);
  for (int i = 0; i < 200; ++i) {
    const double v = std::pow(10.0, exponent(rng));
    CHECK(gev4_to_jpum3(jpum3_to_gev4(v)) == doctest::Approx(v).epsilon(1e-14));
    CHECK(EnergyDensity::from_gev4(jpum3_to_gev4(v)) .joule_per_um3() ==
          doctest::Approx(v).epsilon(1e-14));
  }
}

TEST_CASE("photon counting") {
  const double e_ph = 6.62607015e-34 * 299792458.0 / 800e-9;
  CHECK(photon_energy_j(800e-9) == doctest::Approx(e_ph).epsilon(1e-14));
  CHECK(photon_energy_ev(800e-9) == doctest::Approx(1.5498).epsilon(1e-4));
  CHECK(photons_per_pulse(10.0, 800e-9) == doctest::Approx(4.0275e19).epsilon(1e-4));
  CHECK_THROWS_AS(photons_per_pulse(10.0, 0.0), DomainError);
  CHECK_THROWS_AS(photons_per_pulse(-1.0, 800e-9), DomainError);
}
