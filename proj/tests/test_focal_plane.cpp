#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "vacdiff/errors.hpp"
#include "vacdiff/focal_plane.hpp"
#include "vacdiff/quadrature.hpp"

using namespace vacdiff;
namespace q = vacdiff::quadrature;

namespace {

FocalPlaneGrid baseline_grid() { return FocalPlaneGrid{}; }

FocalIntensityModel baseline_model(double delta) {
  GaussianProbe probe;
  PhaseRegion region{1.5e-3, 10e-6, delta};
  return FocalIntensityModel::from(probe, region, baseline_grid());
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("spatial frequency") {
  FocalPlaneGrid g;
  const auto w0 = spatial_frequency(0.0, 0.0, g);
  CHECK(w0.wx == 0.0);
  CHECK(w0.wy == 0.0);
  const double lf = g.wavelength_m * g.focal_length_m;
  CHECK(spatial_frequency(lf, 0.0, g).wx == doctest::Approx(2.0 * M_PI));
  CHECK(spatial_frequency(0.2e-3, 0.0, g).wx == doctest::Approx(2.0 * M_PI * 2e-4 / 4e-9).epsilon(1e-14));
  CHECK(spatial_frequency(0.2e-3, 0.0, g).wx == doctest::Approx(3.14e5).epsilon(1e-3));
}

TEST_CASE("slit pattern") {
  CHECK(slit_pattern<double>({0.0, 0.0}, 1e-3, 1e-5) == 1.0);
  CHECK(slit_pattern<double>({M_PI / 1e-3, 0.0}, 1e-3, 1e-5) < 1e-30);
  FocalPlaneGrid g;
  const auto w = spatial_frequency(0.0, 0.2e-3, g);
  CHECK(w.wy * 10e-6 == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(slit_pattern<double>(w, 1.5e-3, 10e-6) < 1e-30);
  CHECK(sinc(1e-6) == doctest::Approx(1.0 - 1e-12 / 6.0).epsilon(1e-15));
}

TEST_CASE("background factor") {
  const double a = 1.0 / (2.0 * 1.5e-3 * 1.5e-3);
  CHECK(c_bkg({0.0, 0.0}, a) == doctest::Approx(M_PI / a).epsilon(1e-15));
  CHECK(c_bkg({0.0, 0.0}, a) == doctest::Approx(1.41e-5).epsilon(3e-3));
  const double w = std::sqrt(4.0 * a * std::log(2.0));
  CHECK(c_bkg({w / std::sqrt(2.0), w / std::sqrt(2.0)}, a) ==
        doctest::Approx(0.5 * M_PI / a).epsilon(1e-14));
}

TEST_CASE("signal factor limits") {
  const double sigma = 1.5e-3;
  const double a = 1.0 / (2.0 * sigma * sigma);
  // Both half-widths far beyond the Gaussian: full transform.
  const double wide = 8.0 / std::sqrt(a);
  for (double wx : {0.0, 300.0, 1500.0}) {
    for (double wy : {0.0, 700.0, 2000.0}) {
      CHECK(rel(c_sig({wx, wy}, a, wide, wide), c_bkg({wx, wy}, a)) < 1e-8);
    }
  }
  // Narrow slit relative to the Gaussian: slit area.
  CHECK(c_sig({0.0, 0.0}, a, 1e-6, 1e-7) == doctest::Approx(4e-13).epsilon(1e-6));
  // Closed forms at the origin through erf.
  const double x = sigma * std::sqrt(2.0 * M_PI) * std::erf(1.0 / std::sqrt(2.0));
  const double y = std::sqrt(M_PI / a) * std::erf(std::sqrt(a) * 10e-6);
  CHECK(c_sig({0.0, 0.0}, a, sigma, 10e-6) == doctest::Approx(x * y).epsilon(1e-10));
  CHECK(y == doctest::Approx(20e-6).epsilon(1e-4));
}

TEST_CASE("truncated gaussian cosine matches the closed form for a flat window") {
  // For a -> 0 the integral is 2 sin(w h)/w.
  const double h = 1e-3;
  for (double w : {0.0, 1e3, 1e5, 3e6}) {
    const double exact = w == 0.0 ? 2.0 * h : 2.0 * std::sin(w * h) / w;
    CHECK(std::abs(truncated_gaussian_cosine(w, 1e-6, h) - exact) < 1e-11 * 2.0 * h);
  }
  CHECK_THROWS_AS(truncated_gaussian_cosine(1.0, -1.0, h), DomainError);
}

TEST_CASE("focal intensity basics") {
  auto m = baseline_model(0.0);
  const SpatialFrequency w{1200.0, 3.0e5};
  const double cb = c_bkg(w, m.gaussian_exponent);
  CHECK(intensity(w, m) == doctest::Approx(m.prefactor() * cb * cb).epsilon(1e-14));

  m.region.delta_rad = 0.7;
  const double plus = intensity(w, m);
  m.region.delta_rad = -0.7;
  CHECK(intensity(w, m) == plus);

  m.region.delta_rad = 2.0 * M_PI;
  const double full_turn = intensity(w, m);
  m.region.delta_rad = 0.0;
  CHECK(full_turn == doctest::Approx(intensity(w, m)).epsilon(1e-14));
}

TEST_CASE("small-delta scaling is quadratic") {
  auto m = baseline_model(0.0);
  const SpatialFrequency w{2.0e3, 1.0e5};
  const double i0 = intensity(w, m);
  m.region.delta_rad = 1e-4;
  const double i4 = intensity(w, m);
  m.region.delta_rad = 1e-5;
  const double i5 = intensity(w, m);
  CHECK(rel(i4 - i0, 100.0 * (i5 - i0)) < 1e-6);
}

TEST_CASE("pattern symmetry and non-negativity for random configurations") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    FocalIntensityModel m;
    m.gaussian_exponent = 1.0 / (2.0 * std::pow(1e-3 * (0.5 + u(rng)), 2));
    m.region = {1e-3 * (0.2 + u(rng)), 1e-5 * (0.5 + 5.0 * u(rng)), M_PI * u(rng)};
    const SpatialFrequency w{4e3 * u(rng), 4e5 * u(rng)};
    const double v = intensity(w, m);
    CHECK(v >= 0.0);
    CHECK(intensity({-w.wx, w.wy}, m) == v);
    CHECK(intensity({w.wx, -w.wy}, m) == v);
    CHECK(intensity({-w.wx, -w.wy}, m) == v);
  }
}

TEST_CASE("combined intensity equals the modulus of the field") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double cs = u(rng), cb = u(rng), delta = 4.0 * u(rng);
    const std::complex<double> f = cb + (std::polar(1.0, delta) - 1.0) * cs;
    CHECK(combine_intensity(2.0, cs, cb, delta) == doctest::Approx(2.0 * std::norm(f)).epsilon(1e-12));
  }
}

TEST_CASE("grid layout") {
  FocalPlaneGrid g;
  CHECK(g.half_count() == 20);
  CHECK(g.pixels_per_side() == 41);
  CHECK(g.pixel_centers()[20] == 0.0);
  g.supersampling = 0;
  CHECK_THROWS_AS(g.validate(), DomainError);
}

TEST_CASE("analytic pattern follows intensity") {
  const auto m = baseline_model(0.2);
  const auto p = analytic_pattern(m, baseline_grid());
  CHECK(p.values.rows() == 41);
  CHECK(p.values.cols() == 41);
  CHECK((p.values >= 0.0).all());
  const auto w = spatial_frequency(p.xs[22], p.ys[30], baseline_grid());
  CHECK(p.values(22, 30) == doctest::Approx(intensity(w, m)).epsilon(1e-13));
  CHECK(p.values(18, 30) == p.values(22, 30));
  CHECK(p.center_column() == 20);
}

TEST_CASE("FFT oracle agrees with the analytic route") {
  GaussianProbe probe;
  FocalPlaneGrid grid;
  grid.half_extent_m = 20e-6;
  for (double delta : {0.0, 0.1}) {
    PhaseRegion region{1.5e-3, 0.15e-3, delta};
    const auto oracle = fft_oracle(probe, region, grid, 512);
    const auto model = FocalIntensityModel::from(probe, region, grid);
    const auto analytic = analytic_pattern(model, oracle.xs, oracle.ys, grid);
    const double peak = analytic.values.maxCoeff();
    CHECK((oracle.values - analytic.values).abs().maxCoeff() / peak < 1e-6);
    CHECK(oracle.provenance == Provenance::FftOracle);
  }
}

TEST_CASE("FFT oracle reproduces slit zeros for a nearly flat probe") {
  GaussianProbe probe;
  probe.sigma_m = 1e-3;
  const double mu = 0.05e-3;
  PhaseRegion region{mu, 0.025e-3, M_PI};
  FocalPlaneGrid grid;
  grid.half_extent_m = 100e-6;
  const auto p = fft_oracle(probe, region, grid, 1024);
  const double predicted = grid.wavelength_m * grid.focal_length_m / (2.0 * mu);
  const Eigen::Index row = p.center_column();
  double best = 1e300;
  Eigen::Index at = -1;
  for (Eigen::Index i = 0; i < p.xs.size(); ++i) {
    if (p.xs[i] > 0.5 * predicted && p.xs[i] < 1.5 * predicted && p.values(i, row) < best) {
      best = p.values(i, row);
      at = i;
    }
  }
  REQUIRE(at >= 0);
  CHECK(std::abs(p.xs[at] - predicted) <= p.grid.pixel_m);
}

TEST_CASE("FFT oracle preconditions") {
  GaussianProbe probe;
  PhaseRegion region;
  FocalPlaneGrid grid;
  CHECK_THROWS_AS(fft_oracle(probe, region, grid, 300), DomainError);
  CHECK_THROWS_AS(fft_oracle(probe, region, grid, 128), DomainError);
  FftOracleOptions opt;
  opt.region_samples = 4;
  CHECK_THROWS_AS(fft_oracle(probe, region, grid, 256, opt), ResolutionError);
}

TEST_CASE("band integrals match direct quadrature of the factors") {
  const double a = 1.0 / (2.0 * 1.5e-3 * 1.5e-3);
  const double half = 1.5e-3;
  const std::vector<double> edges{-3000.0, -100.0, 150.0, 4.0e4, 4.3e4};
  const auto bands = axis_band_integrals(a, half, edges);
  q::Tolerance<double> tol;
  tol.relative = 1e-9;
  tol.relative_to_l1 = 1e-10;
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const double w0 = edges[i], w1 = edges[i + 1];
    std::vector<double> br;
    const int pieces = 40;
    for (int k = 0; k <= pieces; ++k) br.push_back(w0 + (w1 - w0) * k / pieces);
    const double ss = q::integrate<double>([&](double w) {
      const double s = truncated_gaussian_cosine(w, a, half);
      return s * s;
    }, br, tol).value;
    const double sb = q::integrate<double>([&](double w) {
      return truncated_gaussian_cosine(w, a, half) * std::sqrt(M_PI / a) * std::exp(-w * w / (4 * a));
    }, br, tol).value;
    CHECK(rel(bands[i].ss, ss) < 1e-8);
    if (std::abs(sb) > 1e-30) CHECK(rel(bands[i].sb, sb) < 1e-8);
  }
  const auto whole = axis_band_integrals(a, half, {-1e5, 1e5});
  CHECK(whole[0].bb == doctest::Approx(M_PI / a * std::sqrt(2.0 * M_PI * a)).epsilon(1e-12));
}

TEST_CASE("pixel counts against brute-force pixel integration") {
  const auto m = baseline_model(0.5);
  FocalPlaneGrid grid;
  grid.half_extent_m = 0.15e-3;
  const auto counts = pixelize_and_count(analytic_pattern(m, grid), 1.0, 1.0, grid);
  // Pixel centred at (0, 0.1 mm); integrate intensity in x and y.
  const double scale = 2.0 * M_PI / (grid.wavelength_m * grid.focal_length_m);
  q::Tolerance<double> tol;
  tol.relative = 1e-8;
  tol.relative_to_l1 = 1e-9;
  auto row = [&](double wy) {
    return q::integrate<double>([&](double wx) { return intensity({wx, wy}, m); },
                                std::vector<double>{-25e-6 * scale, -1e3, 0.0, 1e3, 25e-6 * scale},
                                tol).value;
  };
  const double pix = q::integrate<double>(row, 75e-6 * scale, 125e-6 * scale, tol).value;
  const double total = m.prefactor() * total_spectral_power(m.gaussian_exponent);
  const Eigen::Index ix = counts.center_column();
  CHECK(rel(counts.values(ix, ix + 2), pix / total) < 1e-6);
}

TEST_CASE("pixelization conserves photons and scales linearly") {
  const auto m = baseline_model(0.3);
  FocalPlaneGrid grid;
  const auto pattern = analytic_pattern(m, grid);
  const auto one = pixelize_and_count(pattern, 1e6, 10.0, grid);
  const auto two = pixelize_and_count(pattern, 1e6, 20.0, grid);
  CHECK(((two.values - 2.0 * one.values).abs() <= 1e-12 * two.values.abs()).all());
  CHECK(rel(one.values.sum() + one.remainder, 1e7) < 1e-9);
  CHECK(one.remainder >= 0.0);
  const auto none = pixelize_and_count(pattern, 1e6, 0.0, grid);
  CHECK((none.values == 0.0).all());

  // Pixels tile the camera, so their sum is the box integral over it.
  const double edge = (grid.half_count() + 0.5) * grid.pixel_m;
  CHECK(rel(one.values.sum(), 1e7 * box_fraction(m, edge, edge)) < 1e-9);

  // Without a phase step the pattern is a Gaussian spot, entirely on camera.
  const auto spot = pixelize_and_count(analytic_pattern(baseline_model(0.0), grid), 1.0, 1.0, grid);
  CHECK(std::abs(spot.values.sum() - 1.0) < 1e-12);
  CHECK(spot.remainder < 1e-12);
}

TEST_CASE("midpoint rule converges to the adaptive counts on a resolved pattern") {
  GaussianProbe probe;
  probe.sigma_m = 5e-6;  // focal spot ~ 130 um
  PhaseRegion region{3e-6, 1e-6, 0.8};
  FocalPlaneGrid grid;
  const auto m = FocalIntensityModel::from(probe, region, grid);
  const auto exact = pixelize_and_count(analytic_pattern(m, grid), 1.0, 1.0, grid);
  grid.rule = PixelRule::Midpoint;
  grid.supersampling = 8;
  const auto mid = pixelize_and_count(analytic_pattern(m, grid), 1.0, 1.0, grid);
  CHECK((exact.values - mid.values).abs().maxCoeff() < 1e-3 * exact.values.maxCoeff());
}

TEST_CASE("baseline background stays inside 5 um") {
  const auto m = baseline_model(0.0);
  CHECK(box_fraction(m, 5e-6, 5e-6) >= 0.9999);
  FocalPlaneGrid grid;
  const auto counts = pixelize_and_count(analytic_pattern(m, grid), 4.0e19, 864000.0, grid);
  const Eigen::Index c = counts.center_column();
  const double total = counts.values.sum() + counts.remainder;
  CHECK(counts.values(c, c) / total >= 0.9999);
}

TEST_CASE("normalization and input errors") {
  auto m = baseline_model(0.0);
  FocalPlaneGrid grid;
  auto pattern = analytic_pattern(m, grid);
  pattern.model->amplitude = 0.0;
  CHECK_THROWS_AS(pixelize_and_count(pattern, 1.0, 1.0, grid), NormalizationError);
  pattern.model.reset();
  CHECK_THROWS_AS(pixelize_and_count(pattern, 1.0, 1.0, grid), DomainError);
}

TEST_CASE("pattern csv") {
  FocalPlaneGrid grid;
  grid.half_extent_m = 50e-6;
  const auto p = pixelize_and_count(analytic_pattern(baseline_model(0.0), grid), 1.0, 1.0, grid);
  std::ostringstream out;
  write_pattern_csv(out, p);
  const std::string s = out.str();
  CHECK(s.rfind("x_m,y_m,photons\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 1 + 9);
  CHECK(s.find("-5.00000000e-05,-5.00000000e-05,") != std::string::npos);
}
