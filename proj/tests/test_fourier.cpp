#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "vacdiff/errors.hpp"
#include "vacdiff/fourier.hpp"
#include "vacdiff/quadrature.hpp"

using namespace vacdiff;
using cd = std::complex<double>;
namespace q = vacdiff::quadrature;

namespace {

// integral_lo^hi f(t) exp(-i w t) dt by adaptive quadrature on each part.
template <typename F>
cd oracle_transform(F f, double lo, double hi, double w) {
  q::Tolerance<double> tol;
  tol.relative = 1e-13;
  tol.relative_to_l1 = 1e-14;
  const double re = q::integrate<double>([&](double t) { return f(t) * std::cos(w * t); }, lo, hi, tol).value;
  const double im = q::integrate<double>([&](double t) { return -f(t) * std::sin(w * t); }, lo, hi, tol).value;
  return {re, im};
}

Eigen::VectorXd sample(auto f, double lo, double h, int cells) {
  Eigen::VectorXd s(cells + 1);
  for (int j = 0; j <= cells; ++j) s[j] = f(lo + j * h);
  return s;
}

}  // namespace

TEST_CASE("power moments on both sides of the branch switch") {
  for (int n = 0; n <= 7; ++n) {
    for (double theta : {0.0, 1e-6, 0.5, 3.9, 4.0, 4.1, 10.0, -7.5, 100.0}) {
      const cd oracle = oracle_transform([n](double u) { return std::pow(u, n); }, 0.0, 1.0, theta);
      const cd got = fourier::power_moment(n, theta);
      CHECK(std::abs(got - oracle) < 1e-13);
    }
  }
}

TEST_CASE("weights integrate constants and reproduce the segment length") {
  for (int degree : {1, 3, 5, 7}) {
    for (int cells : {degree, degree + 1, 20, 101}) {
      const auto w = fourier::node_weights(cells, degree, 0.0);
      cd sum = 0.0;
      for (const auto& v : w) sum += v;
      CHECK(std::abs(sum - double(cells)) < 1e-12 * cells);
    }
    CHECK(std::abs(fourier::attenuation(degree, 0.0) - 1.0) < 1e-14);
  }
  CHECK_THROWS_AS(fourier::node_weights(10, 2, 0.1), DomainError);
  CHECK_THROWS_AS(fourier::node_weights(2, 3, 0.1), ResolutionError);
}

TEST_CASE("exact for polynomials of the interpolation degree") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int degree : {1, 3, 5}) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> c(degree + 1);
      for (auto& v : c) v = u(rng);
      auto poly = [&c](double t) {
        double acc = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
        return acc;
      };
      const double lo = -0.7, hi = 1.3;
      const int cells = 13 + trial;
      const double h = (hi - lo) / cells;
      const Eigen::VectorXd s = sample(poly, lo, h, cells);
      Eigen::VectorXd omegas(6);
      omegas << 0.0, 0.3, -2.0, 9.0, 40.0, 0.5 * M_PI / h;
      const Eigen::VectorXcd got = fourier::transform_direct(s, lo, h, omegas, degree);
      for (Eigen::Index k = 0; k < omegas.size(); ++k) {
        const cd oracle = oracle_transform(poly, lo, hi, omegas[k]);
        CHECK(std::abs(got[k] - oracle) < 1e-12);
      }
    }
  }
}

TEST_CASE("FFT path and single-frequency path agree with direct summation") {
  const double lo = -2.0;
  const int cells = 200;
  const double h = 4.0 / cells;
  const Eigen::VectorXd s = sample([](double t) { return std::exp(-t * t) * (1.0 + 0.3 * t); }, lo, h, cells);
  const int length = 512;
  for (int degree : {3, 5}) {
    const Eigen::VectorXcd fft = fourier::transform_fft(s, lo, h, length, degree);
    const Eigen::VectorXd omegas = fourier::fft_frequencies(length, h);
    const Eigen::VectorXcd direct = fourier::transform_direct(s, lo, h, omegas, degree);
    CHECK((fft - direct).cwiseAbs().maxCoeff() < 1e-13);
    const fourier::SegmentTransform single(s, lo, h, degree);
    for (int k = 0; k < length; k += 37) CHECK(std::abs(single(omegas[k]) - direct[k]) < 1e-13);
  }
  CHECK_THROWS_AS(fourier::transform_fft(s, lo, h, 128), ResolutionError);
}

TEST_CASE("gaussian transform converges at fourth order for cubic interpolation") {
  const double a = 1.0;
  auto err = [a](int cells) {
    const double half = 8.0;
    const double h = 2.0 * half / cells;
    const Eigen::VectorXd s = sample([a](double t) { return std::exp(-a * t * t); }, -half, h, cells);
    Eigen::VectorXd omegas = Eigen::VectorXd::LinSpaced(40, 0.0, 6.0);
    const Eigen::VectorXcd got = fourier::transform_direct(s, -half, h, omegas, 3);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < omegas.size(); ++k) {
      const double exact = std::sqrt(M_PI / a) * std::exp(-omegas[k] * omegas[k] / (4.0 * a));
      worst = std::max(worst, std::abs(got[k] - exact));
    }
    return worst;
  };
  const double e1 = err(100);
  const double e2 = err(200);
  CHECK(e2 < 2e-5);
  CHECK(e1 / e2 > 12.0);
}

TEST_CASE("frequency layout") {
  const Eigen::VectorXd w = fourier::fft_frequencies(8, 0.5);
  CHECK(w[0] == doctest::Approx(-2.0 * M_PI * 4 / 4.0));
  CHECK(w[4] == 0.0);
  CHECK(w[7] == doctest::Approx(2.0 * M_PI * 3 / 4.0));
}
