#pragma once

// Globally adaptive Gauss-Kronrod (G10/K21) quadrature. The interval with the
// largest error estimate is bisected until the summed estimate meets the
// tolerance or the interval budget is exhausted.

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "vacdiff/errors.hpp"

namespace vacdiff::quadrature {

template <typename Scalar>
struct Tolerance {
  Scalar relative = Scalar(1e-10);
  Scalar absolute = Scalar(0);
  /// Accept when the error is below this fraction of the integral of |f|.
  /// Needed near zeros of an oscillatory integral, where a purely relative
  /// target is unreachable.
  Scalar relative_to_l1 = Scalar(0);
  int max_intervals = 20000;
};

template <typename Scalar>
struct Result {
  Scalar value = Scalar(0);
  Scalar error = Scalar(0);
  Scalar l1 = Scalar(0);
  int evaluations = 0;
  int intervals = 0;
};

namespace detail {

// QUADPACK qk21 abscissae (descending) and weights.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208799265270, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// 10-point Gauss weights for the odd-indexed Kronrod abscissae.
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <typename Scalar>
struct Segment {
  Scalar lo, hi, value, error, l1;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename Scalar, typename F>
Segment<Scalar> kronrod21(F& f, Scalar lo, Scalar hi) {
  using std::abs;
  const Scalar center = Scalar(0.5) * (lo + hi);
  const Scalar half = Scalar(0.5) * (hi - lo);
  const Scalar fc = f(center);
  Scalar kronrod = fc * Scalar(kWgk[10]);
  Scalar l1 = abs(fc) * Scalar(kWgk[10]);
  Scalar gauss = 0;
  for (int i = 0; i < 10; ++i) {
    const Scalar dx = half * Scalar(kXgk[i]);
    const Scalar f1 = f(center - dx);
    const Scalar f2 = f(center + dx);
    kronrod += Scalar(kWgk[i]) * (f1 + f2);
    l1 += Scalar(kWgk[i]) * (abs(f1) + abs(f2));
    if (i % 2 == 1) gauss += Scalar(kWg[i / 2]) * (f1 + f2);
  }
  const Scalar ahalf = abs(half);
  return {lo, hi, kronrod * half, abs((kronrod - gauss) * half), l1 * ahalf};
}

}  // namespace detail

/// Integrates f over the consecutive intervals given by `breakpoints`
/// (sorted, at least two entries). Throws NumericError when the tolerance is
/// not met within `tol.max_intervals` intervals.
template <typename Scalar, typename F>
Result<Scalar> integrate(F&& f, const std::vector<Scalar>& breakpoints,
                         const Tolerance<Scalar>& tol = {}) {
  using std::abs;
  using std::max;
  if (breakpoints.size() < 2) throw NumericError("quadrature needs at least one interval");

  std::vector<detail::Segment<Scalar>> heap;
  heap.reserve(breakpoints.size() + 64);
  Result<Scalar> out;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    heap.push_back(detail::kronrod21<Scalar>(f, breakpoints[i], breakpoints[i + 1]));
    out.evaluations += 21;
  }
  std::make_heap(heap.begin(), heap.end());

  auto totals = [&heap]() {
    Scalar v = 0, e = 0, l = 0;
    for (const auto& s : heap) {
      v += s.value;
      e += s.error;
      l += s.l1;
    }
    return std::array<Scalar, 3>{v, e, l};
  };

  // Running sums are updated per bisection and recomputed exactly before
  // accepting, so accumulated drift cannot end the loop early.
  auto t = totals();
  auto target = [&tol](const std::array<Scalar, 3>& tt) {
    return max({tol.absolute, tol.relative * abs(tt[0]), tol.relative_to_l1 * tt[2]});
  };
  while (true) {
    if (t[1] <= target(t)) {
      t = totals();
      if (t[1] <= target(t)) break;
    }
    if (static_cast<int>(heap.size()) >= tol.max_intervals) {
      std::ostringstream msg;
      msg << "adaptive quadrature did not converge: " << heap.size()
          << " intervals, estimate " << t[0] << ", error " << t[1] << ", target "
          << target(t);
      throw NumericError(msg.str());
    }
    std::pop_heap(heap.begin(), heap.end());
    const auto worst = heap.back();
    heap.pop_back();
    const Scalar mid = Scalar(0.5) * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      throw NumericError("adaptive quadrature hit the floating-point resolution limit");
    }
    const auto left = detail::kronrod21<Scalar>(f, worst.lo, mid);
    const auto right = detail::kronrod21<Scalar>(f, mid, worst.hi);
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
    out.evaluations += 42;
    t[0] += left.value + right.value - worst.value;
    t[1] += left.error + right.error - worst.error;
    t[2] += left.l1 + right.l1 - worst.l1;
  }
  out.value = t[0];
  out.error = t[1];
  out.l1 = t[2];
  out.intervals = static_cast<int>(heap.size());
  return out;
}

template <typename Scalar, typename F>
Result<Scalar> integrate(F&& f, Scalar lo, Scalar hi, const Tolerance<Scalar>& tol = {}) {
  return integrate<Scalar>(std::forward<F>(f), std::vector<Scalar>{lo, hi}, tol);
}

}  // namespace vacdiff::quadrature
