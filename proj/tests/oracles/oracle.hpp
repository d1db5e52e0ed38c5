#pragma once

// Small reference routines used only by the tests. They are deliberately
// naive (fixed-step Simpson, plain bisection) so that they share no code
// with the library.

#include <cmath>
#include <cstddef>
#include <functional>

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::size_t panels = 20000) {
  if (panels % 2 == 1) ++panels;
  const double h = (b - a) / static_cast<double>(panels);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < panels; ++i) {
    s += (i % 2 == 1 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
  }
  return s * h / 3.0;
}

inline double bisect(const std::function<double(double)>& g, double lo, double hi,
                     int iterations = 200) {
  const bool rising = g(hi) > g(lo);
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((g(mid) > 0.0) == rising ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace oracle
