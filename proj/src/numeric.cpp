#include "selfnorm/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace selfnorm::numeric {
namespace {

constexpr double kTarget = 1e-14;

boost::math::quadrature::tanh_sinh<double>& finite_rule() {
  thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
  return rule;
}

boost::math::quadrature::exp_sinh<double>& half_line_rule() {
  thread_local boost::math::quadrature::exp_sinh<double> rule(12);
  return rule;
}

boost::math::quadrature::sinh_sinh<double>& line_rule() {
  thread_local boost::math::quadrature::sinh_sinh<double> rule(12);
  return rule;
}

Quadrature single_panel(const Integrand& f, double lo, double hi) {
  if (lo == hi) return {};
  if (lo > hi) {
    auto q = single_panel(f, hi, lo);
    return {-q.value, q.error};
  }
  auto g = [&f](double x) { return f(x); };
  double err = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  const bool lo_inf = std::isinf(lo);
  const bool hi_inf = std::isinf(hi);
  if (!lo_inf && !hi_inf) {
    value = finite_rule().integrate(g, lo, hi, kTarget, &err, &l1);
  } else if (lo_inf && hi_inf) {
    value = line_rule().integrate(g, kTarget, &err, &l1);
  } else if (hi_inf) {
    value = half_line_rule().integrate([&g, lo](double x) { return g(lo + x); }, kTarget,
                                       &err, &l1);
  } else {
    value = half_line_rule().integrate([&g, hi](double x) { return g(hi - x); }, kTarget,
                                       &err, &l1);
  }
  // Boost reports a relative error estimate against the L1 norm.
  return {value, err * std::max(l1, std::abs(value))};
}

void check(const Quadrature& q) {
  const double allowed = 100.0 * std::max(kAbsTol, kRelTol * std::abs(q.value));
  if (!std::isfinite(q.value) || q.error > allowed) {
    throw NumericalError("quadrature did not converge (error estimate " +
                             std::to_string(q.error) + ")",
                         q.error);
  }
}

}  // namespace

Quadrature integrate(const Integrand& f, double lo, double hi) {
  auto q = single_panel(f, lo, hi);
  check(q);
  return q;
}

Quadrature integrate_piecewise(const Integrand& f, double lo, double hi,
                               std::span<const double> knots) {
  const double sign = lo <= hi ? 1.0 : -1.0;
  const double a = std::min(lo, hi);
  const double b = std::max(lo, hi);
  std::vector<double> cuts{a};
  for (double k : knots) {
    if (k > a && k < b) cuts.push_back(k);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Quadrature total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto q = single_panel(f, cuts[i], cuts[i + 1]);
    total.value += q.value;
    total.error += q.error;
  }
  check(total);
  total.value *= sign;
  return total;
}

Extremum golden_section_min(const Integrand& f, double lo, double hi, double rel_tol,
                            int max_iter) {
  static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  const double lo0 = lo;
  const double hi0 = hi;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter; ++it) {
    const double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
    if (hi - lo <= rel_tol * scale) break;
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = f(d);
    }
  }
  Extremum best{fc <= fd ? c : d, std::min(fc, fd), false, false, hi - lo};
  const double f_lo = f(lo0);
  const double f_hi = f(hi0);
  if (f_lo <= best.value) best = {lo0, f_lo, true, false, best.bracket};
  if (f_hi < best.value) best = {hi0, f_hi, false, true, best.bracket};
  return best;
}

Extremum scan_then_golden(const Integrand& f, double lo, double hi, std::size_t points,
                          double rel_tol) {
  points = std::max<std::size_t>(points, 3);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points; ++i) {
    const double v = f(lo + step * static_cast<double>(i));
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double a = best == 0 ? lo : lo + step * static_cast<double>(best - 1);
  const double b = best + 1 >= points ? hi : lo + step * static_cast<double>(best + 1);
  auto e = golden_section_min(f, a, b, rel_tol);
  e.at_lower = e.at_lower && a == lo;
  e.at_upper = e.at_upper && b == hi;
  return e;
}

}  // namespace selfnorm::numeric
