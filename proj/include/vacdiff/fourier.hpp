#pragma once

// Fourier integrals of sampled data,
//
//   F(omega) = integral_a^b f(t) exp(-i omega t) dt,
//
// computed exactly for the piecewise-polynomial (odd degree) interpolant of
// equally spaced samples f_j = f(a + j h), j = 0..M. The interior of the
// segment reduces to a plain DFT times an attenuation factor W(theta),
// theta = omega h; nodes within `degree` of either end carry correction
// weights. This keeps the result accurate to the interpolation order at every
// frequency up to Nyquist, even when f jumps to zero at the segment ends.

#include <Eigen/Core>
#include <complex>
#include <vector>

namespace vacdiff::fourier {

/// Per-node weights w_j(theta) such that
/// F = h exp(-i omega a) sum_j f_j exp(-i theta j) w_j(theta).
/// `cells` = M >= degree, degree odd.
std::vector<std::complex<double>> node_weights(int cells, int degree, double theta);

/// Interior attenuation factor W(theta) of the degree-`degree` interpolant.
std::complex<double> attenuation(int degree, double theta);

/// integral_0^1 u^n exp(-i theta u) du.
std::complex<double> power_moment(int n, double theta);

/// Evaluates F at arbitrary frequencies by direct summation.
Eigen::VectorXcd transform_direct(const Eigen::VectorXd& samples, double a, double h,
                                  const Eigen::VectorXd& omegas, int degree = 3);

/// Evaluates F at omega_k = 2 pi k / (P h), k = -P/2 .. P/2-1 (ascending),
/// using a length-P FFT of the zero-padded samples. Requires P >= M + 1 and
/// P even.
Eigen::VectorXcd transform_fft(const Eigen::VectorXd& samples, double a, double h,
                               int fft_length, int degree = 3);

/// The angular frequencies returned by transform_fft.
Eigen::VectorXd fft_frequencies(int fft_length, double h);

/// Fixed sampled segment evaluated at one frequency at a time. Cost per call
/// is O(M); the boundary weights come from a short virtual segment.
class SegmentTransform {
 public:
  SegmentTransform(Eigen::VectorXd samples, double a, double h, int degree = 3);
  std::complex<double> operator()(double omega) const;

 private:
  Eigen::VectorXd samples_;
  double a_;
  double h_;
  int degree_;
};

}  // namespace vacdiff::fourier
