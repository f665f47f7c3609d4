#include "vacdiff/focal_plane.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <ostream>
#include <string>

#include "vacdiff/errors.hpp"
#include "vacdiff/format.hpp"
#include "vacdiff/fourier.hpp"
#include "vacdiff/quadrature.hpp"

namespace vacdiff {

namespace {

constexpr double kPi = constants::pi;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

// One minus cos(delta) without cancellation.
double one_minus_cos(double delta) {
  const double s = std::sin(0.5 * delta);
  return 2.0 * s * s;
}

// Full-line Gaussian cosine transform sqrt(pi/a) exp(-w^2 / (4a)).
double gaussian_transform(double w, double a) {
  return std::sqrt(kPi / a) * std::exp(-w * w / (4.0 * a));
}

// Beyond this distance exp(-a x^2) underflows.
double gaussian_reach(double a) { return std::sqrt(745.0 / a); }

// Memoizes a function of |w|; patterns are symmetric about the axis.
template <typename F>
Eigen::VectorXd evaluate_even(const Eigen::VectorXd& ws, F&& f) {
  std::map<double, double> cache;
  Eigen::VectorXd out(ws.size());
  for (Eigen::Index i = 0; i < ws.size(); ++i) {
    const double key = std::abs(ws[i]);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, f(key)).first;
    out[i] = it->second;
  }
  return out;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// int_{w0}^{w1} (pi/a) exp(-w^2 / (2a)) dw, accurate in both tails.
double gaussian_band_power(double a, double w0, double w1) {
  const double scale = std::sqrt(2.0 * a);
  const double t0 = w0 / scale;
  const double t1 = w1 / scale;
  double diff;
  if (t0 >= 0.0) {
    diff = std::erfc(t0) - std::erfc(t1);
  } else if (t1 <= 0.0) {
    diff = std::erfc(-t1) - std::erfc(-t0);
  } else {
    diff = std::erf(t1) - std::erf(t0);
  }
  return (kPi / a) * scale * 0.5 * std::sqrt(kPi) * diff;
}

}  // namespace

void FocalPlaneGrid::validate() const {
  require_positive(focal_length_m, "focal length");
  require_positive(wavelength_m, "wavelength");
  require_positive(pixel_m, "pixel size");
  require_positive(half_extent_m, "half extent");
  if (supersampling < 1) throw DomainError("supersampling must be at least 1");
  if (half_extent_m / pixel_m > 1e6) throw DomainError("grid has too many pixels");
}

int FocalPlaneGrid::half_count() const {
  validate();
  return static_cast<int>(std::floor(half_extent_m / pixel_m * (1.0 + 1e-12)));
}

Eigen::VectorXd FocalPlaneGrid::pixel_centers() const {
  const int k = half_count();
  Eigen::VectorXd c(2 * k + 1);
  for (int i = -k; i <= k; ++i) c[i + k] = i * pixel_m;
  return c;
}

SpatialFrequency spatial_frequency(double x, double y, const FocalPlaneGrid& grid) {
  grid.validate();
  const double s = 2.0 * kPi / (grid.wavelength_m * grid.focal_length_m);
  return {s * x, s * y};
}

double truncated_gaussian_cosine(double omega, double a, double half) {
  require_positive(a, "Gaussian exponent");
  require_positive(half, "half width");
  if (!std::isfinite(omega)) throw DomainError("spatial frequency must be finite");
  const double w = std::abs(omega);
  const double upper = std::min(half, gaussian_reach(a));
  std::vector<double> breaks{0.0};
  if (w * upper > 50.0) {
    const double period = 2.0 * kPi / w;
    for (double x = period; x < upper; x += period) breaks.push_back(x);
  }
  breaks.push_back(upper);
  quadrature::Tolerance<double> tol;
  tol.relative = 1e-10;
  // cos(w x) carries a phase error of order eps * w * x, which sets a floor
  // on what the panels can resolve once w * half is large.
  tol.relative_to_l1 = std::max(1e-12, 8.0 * std::numeric_limits<double>::epsilon() * w * upper);
  tol.max_intervals = std::max<int>(20000, 8 * static_cast<int>(breaks.size()));
  const auto res = quadrature::integrate<double>(
      [a, w](double x) { return std::exp(-a * x * x) * std::cos(w * x); }, breaks, tol);
  return 2.0 * res.value;
}

double c_sig(const SpatialFrequency& w, double a, double mu, double nu) {
  return truncated_gaussian_cosine(w.wx, a, mu) * truncated_gaussian_cosine(w.wy, a, nu);
}

double c_bkg(const SpatialFrequency& w, double a) {
  require_positive(a, "Gaussian exponent");
  return (kPi / a) * std::exp(-(w.wx * w.wx + w.wy * w.wy) / (4.0 * a));
}

FocalIntensityModel FocalIntensityModel::from(const GaussianProbe& probe,
                                              const PhaseRegion& region,
                                              const FocalPlaneGrid& grid) {
  probe.validate();
  grid.validate();
  if (std::abs(probe.wavelength_m - grid.wavelength_m) > 1e-12 * grid.wavelength_m) {
    throw DomainError("probe and focal-plane wavelengths differ");
  }
  FocalIntensityModel m;
  m.amplitude = probe.amplitude_scale;
  m.gaussian_exponent = probe.gaussian_exponent();
  m.focal_length_m = grid.focal_length_m;
  m.wavelength_m = grid.wavelength_m;
  m.region = region;
  m.validate();
  return m;
}

void FocalIntensityModel::validate() const {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw DomainError("amplitude must be non-negative and finite");
  }
  require_positive(gaussian_exponent, "Gaussian exponent");
  require_positive(focal_length_m, "focal length");
  require_positive(wavelength_m, "wavelength");
  region.validate();
}

double combine_intensity(double prefactor, double csig, double cbkg, double delta) {
  const double omc = one_minus_cos(delta);
  const double value = 2.0 * csig * (csig - cbkg) * omc + cbkg * cbkg;
  if (value < 0.0) {
    const double scale = cbkg * cbkg + 2.0 * std::abs(csig) * (std::abs(csig) + std::abs(cbkg)) * omc;
    if (value < -1e-12 * scale) {
      throw NumericError("negative focal intensity " + format_sci(value) + " at scale " +
                         format_sci(scale));
    }
    return 0.0;
  }
  return prefactor * value;
}

double intensity(const SpatialFrequency& w, const FocalIntensityModel& model) {
  model.validate();
  const double a = model.gaussian_exponent;
  const double cb = c_bkg(w, a);
  const double delta = model.region.delta_rad;
  // The signal factor drops out exactly at delta = 0 (mod 2 pi).
  const double cs = one_minus_cos(delta) == 0.0
                        ? 0.0
                        : c_sig(w, a, model.region.half_width_m, model.region.half_height_m);
  return combine_intensity(model.prefactor(), cs, cb, delta);
}

Eigen::Index DiffractionPattern::center_column() const {
  Eigen::Index best = 0;
  xs.cwiseAbs().minCoeff(&best);
  return best;
}

DiffractionPattern analytic_pattern(const FocalIntensityModel& model, const Eigen::VectorXd& xs,
                                    const Eigen::VectorXd& ys, const FocalPlaneGrid& grid) {
  model.validate();
  grid.validate();
  const double a = model.gaussian_exponent;
  const double scale = 2.0 * kPi / (model.wavelength_m * model.focal_length_m);
  const Eigen::VectorXd wx = scale * xs;
  const Eigen::VectorXd wy = scale * ys;
  const double delta = model.region.delta_rad;
  const bool signal = one_minus_cos(delta) != 0.0;

  auto bkg = [a](double w) { return gaussian_transform(w, a); };
  const Eigen::VectorXd bx = evaluate_even(wx, bkg);
  const Eigen::VectorXd by = evaluate_even(wy, bkg);
  Eigen::VectorXd sx = Eigen::VectorXd::Zero(wx.size());
  Eigen::VectorXd sy = Eigen::VectorXd::Zero(wy.size());
  if (signal) {
    const double mu = model.region.half_width_m;
    const double nu = model.region.half_height_m;
    sx = evaluate_even(wx, [a, mu](double w) { return truncated_gaussian_cosine(w, a, mu); });
    sy = evaluate_even(wy, [a, nu](double w) { return truncated_gaussian_cosine(w, a, nu); });
  }

  DiffractionPattern p;
  p.grid = grid;
  p.xs = xs;
  p.ys = ys;
  p.values.resize(xs.size(), ys.size());
  p.kind = PatternKind::Intensity;
  p.provenance = Provenance::Analytic;
  p.model = model;
  const double pref = model.prefactor();
  for (Eigen::Index j = 0; j < ys.size(); ++j) {
    for (Eigen::Index i = 0; i < xs.size(); ++i) {
      p.values(i, j) = combine_intensity(pref, sx[i] * sy[j], bx[i] * by[j], delta);
    }
  }
  return p;
}

DiffractionPattern analytic_pattern(const FocalIntensityModel& model, const FocalPlaneGrid& grid) {
  const Eigen::VectorXd c = grid.pixel_centers();
  return analytic_pattern(model, c, c, grid);
}

DiffractionPattern fft_oracle(const GaussianProbe& probe, const PhaseRegion& region,
                              const FocalPlaneGrid& grid, int samples,
                              const FftOracleOptions& options) {
  probe.validate();
  region.validate();
  grid.validate();
  if (!is_power_of_two(samples) || samples < 256) {
    throw DomainError("oracle sample count must be a power of two >= 256");
  }
  if (options.region_samples < 8) {
    throw ResolutionError("phase region needs at least 8 samples across each axis");
  }
  const double a = probe.gaussian_exponent();
  const double sigma = 1.0 / std::sqrt(2.0 * a);
  const double window = 6.0 * sigma;
  const int nodes = samples / 4;
  const double h = 2.0 * window / (nodes - 1);
  if (h > 0.5 * sigma) throw ResolutionError("Gaussian under-resolved by the oracle grid");

  Eigen::VectorXd gauss(nodes);
  for (int j = 0; j < nodes; ++j) {
    const double x = -window + j * h;
    gauss[j] = std::exp(-a * x * x);
  }
  const Eigen::VectorXcd g = fourier::transform_fft(gauss, -window, h, samples, options.degree);
  const Eigen::VectorXd omegas = fourier::fft_frequencies(samples, h);

  const double to_metres = grid.metres_per_radian();
  std::vector<int> keep;
  for (int k = 0; k < samples; ++k) {
    if (std::abs(omegas[k] * to_metres) <= grid.half_extent_m * (1.0 + 1e-12)) keep.push_back(k);
  }
  if (keep.empty()) throw ResolutionError("oracle frequency grid misses the focal-plane extent");

  // Crop before the region transforms, which cost O(cells) per frequency.
  Eigen::VectorXd kept_omegas(keep.size());
  Eigen::VectorXcd gk(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    kept_omegas[i] = omegas[keep[i]];
    gk[i] = g[keep[i]];
  }
  auto crop_transform = [&](double half) {
    const int cells = std::max(options.region_samples,
                               2 * static_cast<int>(std::ceil(half / h)));
    const double hr = 2.0 * half / cells;
    Eigen::VectorXd f(cells + 1);
    for (int j = 0; j <= cells; ++j) {
      const double x = -half + j * hr;
      f[j] = std::exp(-a * x * x);
    }
    return fourier::transform_direct(f, -half, hr, kept_omegas, options.degree);
  };
  const Eigen::VectorXcd rx = crop_transform(region.half_width_m);
  const Eigen::VectorXcd ry = crop_transform(region.half_height_m);

  const double s = std::sin(region.delta_rad);
  const std::complex<double> phase_minus_one{-one_minus_cos(region.delta_rad), s};
  const double amp = probe.amplitude_scale / (grid.focal_length_m * grid.wavelength_m);
  const double pref = amp * amp;

  DiffractionPattern p;
  p.grid = grid;
  p.grid.pixel_m = 2.0 * kPi / (samples * h) * to_metres;
  p.xs = kept_omegas * to_metres;
  p.ys = p.xs;
  p.values.resize(keep.size(), keep.size());
  p.kind = PatternKind::Intensity;
  p.provenance = Provenance::FftOracle;
  for (Eigen::Index j = 0; j < p.ys.size(); ++j) {
    for (Eigen::Index i = 0; i < p.xs.size(); ++i) {
      const std::complex<double> f = gk[i] * gk[j] + phase_minus_one * rx[i] * ry[j];
      p.values(i, j) = pref * std::norm(f);
    }
  }
  return p;
}

std::vector<AxisBand> axis_band_integrals(double a, double half,
                                          const std::vector<double>& edges) {
  require_positive(a, "Gaussian exponent");
  require_positive(half, "half width");
  if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end())) {
    throw DomainError("band edges must be ascending with at least two entries");
  }
  // S(w) is evaluated from a finely sampled Gaussian through the
  // endpoint-corrected transform: O(cells) per frequency at any w.
  const double sigma = 1.0 / std::sqrt(2.0 * a);
  const double reach = std::min(half, std::sqrt(40.0 / a));
  int cells = std::max(64, static_cast<int>(std::ceil(2.0 * reach / (sigma / 400.0))));
  cells += cells % 2;
  const double h = 2.0 * reach / cells;
  Eigen::VectorXd f(cells + 1);
  for (int j = 0; j <= cells; ++j) {
    const double x = -reach + j * h;
    f[j] = std::exp(-a * x * x);
  }
  const fourier::SegmentTransform transform(std::move(f), -reach, h, 5);
  auto S = [&transform](double w) { return transform(w).real(); };
  auto B = [a](double w) { return gaussian_transform(w, a); };

  // S carries a round-off floor of about 1e-13 S(0); the absolute targets
  // below keep the adaptive loop from chasing it in the far tails.
  constexpr double kFloor = 1e-13;
  const double s0 = std::abs(S(0.0));
  const double total_ss = 2.0 * kPi * std::sqrt(kPi / (2.0 * a));
  const double b_norm = std::sqrt(kPi / a) * std::sqrt(4.0 * a);  // int B dw / sqrt(pi)
  quadrature::Tolerance<double> tol;
  tol.relative = 1e-10;
  tol.relative_to_l1 = 1e-11;

  const double oscillation = kPi / reach;
  const double b_cut = std::sqrt(4.0 * a * 745.0);
  auto breakpoints = [oscillation](double lo, double hi) {
    std::vector<double> br{lo};
    const int pieces = static_cast<int>(std::ceil((hi - lo) / oscillation));
    for (int k = 1; k < pieces; ++k) br.push_back(lo + (hi - lo) * k / pieces);
    br.push_back(hi);
    return br;
  };
  std::vector<AxisBand> out(edges.size() - 1);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double w0 = edges[i];
    const double w1 = edges[i + 1];
    AxisBand band;
    band.bb = gaussian_band_power(a, w0, w1);
    if (w1 > w0) {
      const auto br = breakpoints(w0, w1);
      tol.max_intervals = std::max<int>(20000, 8 * static_cast<int>(br.size()));
      // Cauchy-Schwarz bound on int |S| over the band.
      tol.absolute = 2.0 * kFloor * s0 * std::sqrt((w1 - w0) * total_ss);
      band.ss = quadrature::integrate<double>([&S](double w) {
                  const double s = S(w);
                  return s * s;
                }, br, tol).value;
      const double lo = std::max(w0, -b_cut);
      const double hi = std::min(w1, b_cut);
      if (hi > lo) {
        const double b_band = 0.5 * std::sqrt(kPi) * b_norm *
                              (std::erf(hi / std::sqrt(4.0 * a)) - std::erf(lo / std::sqrt(4.0 * a)));
        tol.absolute = kFloor * s0 * std::abs(b_band);
        band.sb = quadrature::integrate<double>([&S, &B](double w) { return S(w) * B(w); },
                                                breakpoints(lo, hi), tol).value;
      }
    }
    out[i] = band;
  }
  return out;
}

double total_spectral_power(double a) {
  require_positive(a, "Gaussian exponent");
  return 2.0 * kPi * kPi * kPi / a;
}

namespace {

std::vector<double> band_edges(double half_span, double scale) {
  return {-half_span * scale, half_span * scale};
}

double pixel_power(const AxisBand& x, const AxisBand& y, double omc) {
  const double signal = 2.0 * omc * (x.ss * y.ss - x.sb * y.sb);
  const double value = signal + x.bb * y.bb;
  if (value < 0.0) {
    const double scale = 2.0 * omc * (std::abs(x.ss * y.ss) + std::abs(x.sb * y.sb)) + x.bb * y.bb;
    if (value < -1e-12 * scale) {
      throw NumericError("negative pixel power " + format_sci(value));
    }
    return 0.0;
  }
  return value;
}

}  // namespace

double box_fraction(const FocalIntensityModel& model, double half_x, double half_y) {
  model.validate();
  require_positive(half_x, "box half width");
  require_positive(half_y, "box half height");
  const double a = model.gaussian_exponent;
  const double scale = 2.0 * kPi / (model.wavelength_m * model.focal_length_m);
  const auto bx = axis_band_integrals(a, model.region.half_width_m, band_edges(half_x, scale));
  const auto by = axis_band_integrals(a, model.region.half_height_m, band_edges(half_y, scale));
  return pixel_power(bx[0], by[0], one_minus_cos(model.region.delta_rad)) / total_spectral_power(a);
}

namespace {

DiffractionPattern empty_counts(const FocalIntensityModel& model, const FocalPlaneGrid& grid) {
  const Eigen::VectorXd centers = grid.pixel_centers();
  DiffractionPattern out;
  out.grid = grid;
  out.xs = centers;
  out.ys = centers;
  out.values = Eigen::ArrayXXd::Zero(centers.size(), centers.size());
  out.kind = PatternKind::PhotonCount;
  out.provenance = Provenance::Analytic;
  out.model = model;
  return out;
}

void settle_remainder(DiffractionPattern& out, double photons, bool strict) {
  out.remainder = photons - out.values.sum();
  if (out.remainder < 0.0) {
    if (strict && out.remainder < -1e-9 * photons) {
      throw NumericError("pixel counts exceed the plane total by " + format_sci(-out.remainder));
    }
    out.remainder = 0.0;
  }
}

void check_counts(double photons_per_pulse, double n_pulses) {
  if (!(photons_per_pulse >= 0.0) || !(n_pulses >= 0.0) || !std::isfinite(photons_per_pulse) ||
      !std::isfinite(n_pulses)) {
    throw DomainError("photon and pulse counts must be non-negative and finite");
  }
}

void check_normalizable(const FocalIntensityModel& model) {
  const double plane_power = model.prefactor() * total_spectral_power(model.gaussian_exponent);
  if (!(plane_power > 0.0) || !std::isfinite(plane_power)) {
    throw NormalizationError("pattern carries no intensity to normalize");
  }
}

}  // namespace

PixelBands pixel_bands(const FocalIntensityModel& model, const FocalPlaneGrid& grid) {
  model.validate();
  grid.validate();
  const Eigen::VectorXd centers = grid.pixel_centers();
  const Eigen::Index n = centers.size();
  const double scale = 2.0 * kPi / (model.wavelength_m * model.focal_length_m);
  std::vector<double> edges(n + 1);
  for (Eigen::Index i = 0; i <= n; ++i) edges[i] = (centers[0] + (i - 0.5) * grid.pixel_m) * scale;
  PixelBands bands;
  bands.x = axis_band_integrals(model.gaussian_exponent, model.region.half_width_m, edges);
  bands.y = axis_band_integrals(model.gaussian_exponent, model.region.half_height_m, edges);
  return bands;
}

DiffractionPattern counts_from_bands(const PixelBands& bands, const FocalIntensityModel& model,
                                     double photons, const FocalPlaneGrid& grid) {
  check_counts(photons, 1.0);
  check_normalizable(model);
  DiffractionPattern out = empty_counts(model, grid);
  const auto n = static_cast<std::size_t>(out.xs.size());
  if (bands.x.size() != n || bands.y.size() != n) {
    throw GridMismatchError("pixel bands do not match the camera grid");
  }
  if (photons == 0.0) return out;
  const double omc = one_minus_cos(model.region.delta_rad);
  const double per_power = photons / total_spectral_power(model.gaussian_exponent);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      out.values(i, j) = per_power * pixel_power(bands.x[i], bands.y[j], omc);
    }
  }
  settle_remainder(out, photons, true);
  return out;
}

DiffractionPattern pixelize_and_count(const DiffractionPattern& pattern, double photons_per_pulse,
                                      double n_pulses, const FocalPlaneGrid& grid) {
  if (pattern.kind != PatternKind::Intensity || !pattern.model) {
    throw DomainError("pixelization needs an analytic intensity pattern");
  }
  check_counts(photons_per_pulse, n_pulses);
  grid.validate();
  const FocalIntensityModel& model = *pattern.model;
  model.validate();
  check_normalizable(model);
  const double photons = photons_per_pulse * n_pulses;
  if (photons == 0.0) return empty_counts(model, grid);

  if (grid.rule == PixelRule::Adaptive) {
    return counts_from_bands(pixel_bands(model, grid), model, photons, grid);
  }

  DiffractionPattern out = empty_counts(model, grid);
  const Eigen::Index n = out.xs.size();
  const double scale = 2.0 * kPi / (model.wavelength_m * model.focal_length_m);
  const double per_power = photons / total_spectral_power(model.gaussian_exponent);
  const int m = grid.supersampling;
  const double sub = grid.pixel_m / m;
  Eigen::VectorXd pts(n * m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = 0; k < m; ++k) pts[i * m + k] = out.xs[i] - 0.5 * grid.pixel_m + (k + 0.5) * sub;
  }
  FocalIntensityModel unit = model;
  unit.amplitude = 1.0;
  const DiffractionPattern fine = analytic_pattern(unit, pts, pts, grid);
  // Midpoint weight per sample in spatial-frequency area; prefactor removed.
  const double weight = (sub * scale) * (sub * scale) / unit.prefactor();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      out.values(i, j) = per_power * weight * fine.values.block(i * m, j * m, m, m).sum();
    }
  }
  settle_remainder(out, photons, false);
  return out;
}

void write_pattern_csv(std::ostream& out, const DiffractionPattern& pattern) {
  out << "x_m,y_m,photons\n";
  for (Eigen::Index i = 0; i < pattern.xs.size(); ++i) {
    for (Eigen::Index j = 0; j < pattern.ys.size(); ++j) {
      out << format_sci(pattern.xs[i]) << ',' << format_sci(pattern.ys[j]) << ','
          << format_sci(pattern.values(i, j)) << '\n';
    }
  }
}

}  // namespace vacdiff
