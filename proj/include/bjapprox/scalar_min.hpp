#pragma once

#include <cmath>
#include <functional>

namespace bjapprox {

struct ScalarMinimum {
  double argmin = 0.0;
  double value = 0.0;
  double lo = 0.0;  // final bracket
  double hi = 0.0;
  int iterations = 0;
};

/// Golden-section search for the minimum of a convex (or unimodal) function
/// on [lo, hi]. Stops when the bracket is narrower than
/// rel_width * (1 + |midpoint|). The returned point is the best evaluated one.
template <class F>
ScalarMinimum golden_section_minimize(F&& f, double lo, double hi, double rel_width = 1e-12,
                                      int max_iterations = 400) {
  constexpr double inv_phi = 0.6180339887498949;  // (sqrt(5) - 1) / 2
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  ScalarMinimum out;
  for (; out.iterations < max_iterations; ++out.iterations) {
    if (b - a <= rel_width * (1.0 + std::abs(0.5 * (a + b)))) break;
    if (fc <= fd) {
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
  const double mid = 0.5 * (a + b);
  const double fm = f(mid);
  out.lo = a;
  out.hi = b;
  out.argmin = mid;
  out.value = fm;
  if (fc < out.value) {
    out.argmin = c;
    out.value = fc;
  }
  if (fd < out.value) {
    out.argmin = d;
    out.value = fd;
  }
  return out;
}

}  // namespace bjapprox
