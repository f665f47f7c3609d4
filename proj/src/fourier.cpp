#include "vacdiff/fourier.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "vacdiff/errors.hpp"

namespace vacdiff::fourier {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};
constexpr int kMaxDegree = 7;

void check_degree(int degree) {
  if (degree < 1 || degree > kMaxDegree || degree % 2 == 0) {
    throw DomainError("interpolation degree must be odd and in [1, 7]");
  }
}

// Monomial coefficients of the Lagrange basis polynomials on integer nodes
// shift, shift+1, ..., shift+degree.
std::array<std::array<double, kMaxDegree + 1>, kMaxDegree + 1> lagrange_coefficients(
    int degree, int shift) {
  std::array<std::array<double, kMaxDegree + 1>, kMaxDegree + 1> out{};
  for (int k = 0; k <= degree; ++k) {
    std::array<double, kMaxDegree + 2> poly{};
    poly[0] = 1.0;
    int order = 0;
    double denom = 1.0;
    const double rk = shift + k;
    for (int m = 0; m <= degree; ++m) {
      if (m == k) continue;
      const double rm = shift + m;
      // poly *= (u - rm)
      for (int p = order + 1; p > 0; --p) poly[p] = poly[p - 1] - rm * poly[p];
      poly[0] = -rm * poly[0];
      ++order;
      denom *= (rk - rm);
    }
    for (int p = 0; p <= degree; ++p) out[k][p] = poly[p] / denom;
  }
  return out;
}

// J_k = integral_0^1 L_k(u) exp(-i theta u) du for every basis polynomial of
// a stencil whose first node sits at `shift` relative to the cell start.
std::array<cd, kMaxDegree + 1> stencil_integrals(int degree, int shift,
                                                 const std::array<cd, kMaxDegree + 1>& moments) {
  const auto coeff = lagrange_coefficients(degree, shift);
  std::array<cd, kMaxDegree + 1> out{};
  for (int k = 0; k <= degree; ++k) {
    cd acc = 0.0;
    for (int p = 0; p <= degree; ++p) acc += coeff[k][p] * moments[p];
    out[k] = acc;
  }
  return out;
}

std::array<cd, kMaxDegree + 1> all_moments(int degree, double theta) {
  std::array<cd, kMaxDegree + 1> m{};
  for (int n = 0; n <= degree; ++n) m[n] = power_moment(n, theta);
  return m;
}

int stencil_start(int cell, int cells, int degree) {
  return std::clamp(cell - (degree - 1) / 2, 0, cells - degree);
}

}  // namespace

cd power_moment(int n, double theta) {
  if (std::abs(theta) <= 4.0) {
    // sum_m (-i theta)^m / (m! (n + m + 1))
    cd term = 1.0;
    cd sum = 1.0 / (n + 1.0);
    for (int m = 1; m < 200; ++m) {
      term *= -kI * theta / static_cast<double>(m);
      const cd add = term / static_cast<double>(n + m + 1);
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  const cd e = std::exp(-kI * theta);
  cd value = (1.0 - e) / (kI * theta);
  for (int k = 1; k <= n; ++k) value = (static_cast<double>(k) * value - e) / (kI * theta);
  return value;
}

std::vector<cd> node_weights(int cells, int degree, double theta) {
  check_degree(degree);
  if (cells < degree) throw ResolutionError("segment has fewer cells than the interpolation degree");
  const auto moments = all_moments(degree, theta);

  // Distinct stencil shifts lie in [-degree, 0]; cache their integrals.
  std::array<std::array<cd, kMaxDegree + 1>, kMaxDegree + 1> cache{};
  std::array<bool, kMaxDegree + 1> have{};
  std::vector<cd> phase(2 * degree + 1);
  for (int m = -degree; m <= degree; ++m) phase[m + degree] = std::exp(-kI * theta * double(m));

  std::vector<cd> w(cells + 1, cd{0.0});
  for (int c = 0; c < cells; ++c) {
    const int s = stencil_start(c, cells, degree);
    const int shift = s - c;
    if (!have[-shift]) {
      cache[-shift] = stencil_integrals(degree, shift, moments);
      have[-shift] = true;
    }
    const auto& j_k = cache[-shift];
    for (int k = 0; k <= degree; ++k) {
      const int j = s + k;
      // exp(-i theta (c - j)), with c - j in [-degree, degree]
      w[j] += phase[c - j + degree] * j_k[k];
    }
  }
  return w;
}

cd attenuation(int degree, double theta) {
  check_degree(degree);
  const int cells = 4 * degree + 4;
  return node_weights(cells, degree, theta)[cells / 2];
}

Eigen::VectorXcd transform_direct(const Eigen::VectorXd& samples, double a, double h,
                                  const Eigen::VectorXd& omegas, int degree) {
  const int cells = static_cast<int>(samples.size()) - 1;
  Eigen::VectorXcd out(omegas.size());
  for (Eigen::Index k = 0; k < omegas.size(); ++k) {
    const double theta = omegas[k] * h;
    const auto w = node_weights(cells, degree, theta);
    const cd step = std::exp(-kI * theta);
    cd rot = 1.0;
    cd acc = 0.0;
    for (int j = 0; j <= cells; ++j) {
      acc += samples[j] * rot * w[j];
      rot *= step;
      // re-anchor the running phase to limit drift on long segments
      if ((j & 63) == 63) rot = std::exp(-kI * theta * double(j + 1));
    }
    out[k] = h * std::exp(-kI * omegas[k] * a) * acc;
  }
  return out;
}

Eigen::VectorXd fft_frequencies(int fft_length, double h) {
  Eigen::VectorXd w(fft_length);
  for (int i = 0; i < fft_length; ++i) {
    const int k = i - fft_length / 2;
    w[i] = 2.0 * std::numbers::pi * k / (fft_length * h);
  }
  return w;
}

Eigen::VectorXcd transform_fft(const Eigen::VectorXd& samples, double a, double h,
                               int fft_length, int degree) {
  check_degree(degree);
  const int cells = static_cast<int>(samples.size()) - 1;
  if (fft_length < cells + 1 || fft_length % 2 != 0) {
    throw ResolutionError("FFT length must be even and cover every sample");
  }
  const Eigen::VectorXd omegas = fft_frequencies(fft_length, h);
  const int border = degree + 1;
  const int virtual_cells = 4 * degree + 4;
  if (cells < virtual_cells) return transform_direct(samples, a, h, omegas, degree);

  Eigen::VectorXcd padded = Eigen::VectorXcd::Zero(fft_length);
  padded.head(cells + 1) = samples.cast<cd>();
  Eigen::VectorXcd spectrum;
  Eigen::FFT<double> fft;
  fft.fwd(spectrum, padded);

  Eigen::VectorXcd out(fft_length);
  for (int i = 0; i < fft_length; ++i) {
    const int k = i - fft_length / 2;
    const int bin = (k + fft_length) % fft_length;
    const double theta = 2.0 * std::numbers::pi * k / fft_length;
    // Boundary weights are translation invariant, so a short virtual segment
    // supplies both ends; its middle node gives W.
    const auto w = node_weights(virtual_cells, degree, theta);
    const cd interior = w[virtual_cells / 2];
    cd acc = interior * spectrum[bin];
    for (int j = 0; j < border; ++j) {
      acc += (w[j] - interior) * samples[j] * std::exp(-kI * theta * double(j));
      const int jr = cells - j;
      acc += (w[virtual_cells - j] - interior) * samples[jr] *
             std::exp(-kI * theta * double(jr));
    }
    out[i] = h * std::exp(-kI * omegas[i] * a) * acc;
  }
  return out;
}

SegmentTransform::SegmentTransform(Eigen::VectorXd samples, double a, double h, int degree)
    : samples_(std::move(samples)), a_(a), h_(h), degree_(degree) {
  check_degree(degree);
  if (samples_.size() < degree + 1) {
    throw ResolutionError("segment has fewer cells than the interpolation degree");
  }
  if (!(h > 0.0)) throw DomainError("sample spacing must be positive");
}

cd SegmentTransform::operator()(double omega) const {
  const int cells = static_cast<int>(samples_.size()) - 1;
  const double theta = omega * h_;
  const int virtual_cells = 4 * degree_ + 4;
  if (cells < virtual_cells) {
    Eigen::VectorXd w(1);
    w[0] = omega;
    return transform_direct(samples_, a_, h_, w, degree_)[0];
  }
  const auto w = node_weights(virtual_cells, degree_, theta);
  const cd interior = w[virtual_cells / 2];
  const cd step = std::exp(-kI * theta);
  cd rot = 1.0;
  cd sum = 0.0;
  for (int j = 0; j <= cells; ++j) {
    sum += samples_[j] * rot;
    rot *= step;
    if ((j & 63) == 63) rot = std::exp(-kI * theta * double(j + 1));
  }
  cd acc = interior * sum;
  for (int j = 0; j <= degree_; ++j) {
    acc += (w[j] - interior) * samples_[j] * std::exp(-kI * theta * double(j));
    const int jr = cells - j;
    acc += (w[virtual_cells - j] - interior) * samples_[jr] * std::exp(-kI * theta * double(jr));
  }
  return h_ * std::exp(-kI * omega * a_) * acc;
}

}  // namespace vacdiff::fourier
