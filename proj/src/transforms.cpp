#include "selfnorm/transforms.hpp"

#include <cmath>
#include <stdexcept>

#include "selfnorm/numeric.hpp"

namespace selfnorm::transforms {

TransformResult fenchel_legendre(const std::function<double(double)>& log_eval, double x,
                                 double t_lo, double t_hi) {
  if (!(t_lo <= t_hi)) throw std::invalid_argument("empty transform interval");
  auto neg = [&](double t) {
    const double v = log_eval(t);
    if (std::isnan(v)) throw NumericalError("cgf evaluation returned NaN", v);
    return -(x * t - v);
  };
  if (t_lo == t_hi) return {-neg(t_lo), t_lo, 0.0, true, false};
  auto e = numeric::golden_section_min(neg, t_lo, t_hi, 1e-10);
  TransformResult r;
  r.value = -e.value;
  r.arg = e.arg;
  r.residual = e.bracket;
  r.boundary = e.at_lower || e.at_upper;
  return r;
}

TransformResult fenchel_legendre(const bounds::MgfHandle& mgf, double x, double t_lo,
                                 double t_hi) {
  return fenchel_legendre([&](double t) { return mgf.log_value(t); }, x, t_lo, t_hi);
}

double cramer_h(double y) {
  if (!(y >= 0.0)) throw std::invalid_argument("h(y) needs y >= 0");
  if (y < 1e-3) {
    // sum_{k>=2} (-1)^k y^k / (k (k - 1))
    double term = y * y;
    double total = 0.0;
    for (int k = 2; k < 12; ++k) {
      total += (k % 2 == 0 ? 1.0 : -1.0) * term / (k * (k - 1.0));
      term *= y;
    }
    return total;
  }
  return (1.0 + y) * std::log1p(y) - y;
}

TransformResult solve_yx(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("y_x needs x > 0");
  const double target = x * x;
  double lo = 0.0;
  double hi = 1.0;
  while (cramer_h(hi) <= target) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cramer_h(mid) > target ? hi : lo) = mid;
  }
  // Newton polish; h'(y) = log(1 + y).
  double y = 0.5 * (lo + hi);
  for (int i = 0; i < 4; ++i) {
    const double step = (cramer_h(y) - target) / std::log1p(y);
    const double next = y - step;
    if (!(next > lo && next < hi) || next == y) break;
    y = next;
  }
  return {y, y, std::abs(cramer_h(y) - target), false, false};
}

double ar1_ell(double y, double x) {
  if (!(y > 0.0) || !(x > 0.0)) throw std::invalid_argument("l(y) needs y > 0 and x > 0");
  return std::log1p(y) / (x * x + y);
}

LdpRates ar1_ldp_rates(double x, double theta) {
  if (!(std::abs(theta) < 1.0)) throw std::invalid_argument("rate functions need |theta| < 1");
  const double root = std::sqrt(theta * theta + 8.0);
  const double a = (theta - root) / 4.0;
  const double b = (theta + root) / 4.0;
  auto inner = [&] {
    const double v = 0.5 * std::log((1.0 + theta * theta - 2.0 * theta * x) / (1.0 - x * x));
    return TransformResult{v, x, 0.0, false, false};
  };
  LdpRates out;
  if (x >= a && x <= b) {
    out.least_squares = inner();
  } else {
    out.least_squares = {std::log(std::abs(theta - 2.0 * x)), x, 0.0, false, false};
  }
  out.yule_walker = (x > -1.0 && x < 1.0) ? inner() : TransformResult::infinity();
  return out;
}

}  // namespace selfnorm::transforms
