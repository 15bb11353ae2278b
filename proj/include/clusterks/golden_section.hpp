#pragma once

#include <cmath>
#include <utility>

namespace clusterks {

struct ScalarMinimum {
  double argmin;
  double value;
};

// Golden-section search for a minimum of f on [lo, hi]. Assumes f is
// unimodal on the interval; stops once the bracket is narrower than tol.
template <class F>
ScalarMinimum golden_section_minimize(F&& f, double lo, double hi,
                                      double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
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
  // The midpoint can be marginally worse than the best probe.
  if (fc < fm && fc <= fd) return {c, fc};
  if (fd < fm) return {d, fd};
  return {mid, fm};
}

}  // namespace clusterks
