#pragma once

#include <algorithm>
#include <cmath>

namespace zsa::detail {

// Golden-section search for a minimum of fn on [lo, hi].
template <typename Fn>
double golden_minimize(Fn&& fn, double lo, double hi, int iterations = 80) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  for (int it = 0; it < iterations && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = fn(d);
    }
  }
  return fc <= fd ? c : d;
}

}  // namespace zsa::detail
