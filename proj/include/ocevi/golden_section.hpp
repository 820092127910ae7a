#pragma once

#include <cmath>
#include <utility>

namespace ocevi {

template <typename Scalar>
struct GoldenSectionResult {
  Scalar argmax;
  Scalar value;
  int iterations;
};

/**
 * Maximizes a unimodal (e.g. concave) function on [lo, hi].
 *
 * Stops once the bracket is no wider than `tolerance` or after
 * `max_iterations` shrink steps. The returned point is the best of the final
 * bracket midpoint and the two original endpoints, so monotone objectives
 * land exactly on the boundary.
 */
template <typename Scalar, typename F>
GoldenSectionResult<Scalar> golden_section_maximize(F&& f, Scalar lo, Scalar hi, Scalar tolerance,
                                                    int max_iterations = 200) {
  if (hi < lo) std::swap(lo, hi);
  const Scalar f_lo = f(lo);
  if (!(hi > lo)) return {lo, f_lo, 0};
  const Scalar f_hi = f(hi);

  const Scalar inv_phi = (std::sqrt(Scalar(5)) - Scalar(1)) / Scalar(2);
  Scalar a = lo, b = hi;
  Scalar c = b - inv_phi * (b - a);
  Scalar d = a + inv_phi * (b - a);
  Scalar fc = f(c), fd = f(d);
  int it = 0;
  for (; it < max_iterations && (b - a) > tolerance; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }

  GoldenSectionResult<Scalar> best{(a + b) / 2, f((a + b) / 2), it};
  if (fc > best.value) best = {c, fc, it};
  if (fd > best.value) best = {d, fd, it};
  if (f_lo > best.value) best = {lo, f_lo, it};
  if (f_hi > best.value) best = {hi, f_hi, it};
  return best;
}

}  // namespace ocevi
