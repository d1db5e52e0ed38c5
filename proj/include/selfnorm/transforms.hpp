#pragma once

#include <functional>
#include <limits>

#include "selfnorm/bounds.hpp"

namespace selfnorm::transforms {

/// Result of a 1-D transform: a supremum with its maximiser, or a root.
/// Infinite values are flagged explicitly rather than produced by overflow.
struct TransformResult {
  double value = 0.0;
  double arg = 0.0;
  double residual = 0.0;
  bool boundary = false;
  bool infinite = false;

  static TransformResult infinity() {
    return {std::numeric_limits<double>::infinity(), 0.0, 0.0, false, true};
  }
};

/// sup_{t_lo <= t <= t_hi} { x t - log_eval(t) } for a convex log_eval.
TransformResult fenchel_legendre(const std::function<double(double)>& log_eval, double x,
                                 double t_lo, double t_hi);
TransformResult fenchel_legendre(const bounds::MgfHandle& mgf, double x, double t_lo,
                                 double t_hi);

/// h(y) = (1 + y) log(1 + y) - y, y >= 0.
double cramer_h(double y);

/// Unique positive root y_x of h(y) = x^2; residual = |h(y_x) - x^2|.
TransformResult solve_yx(double x);

/// l(y) = log(1 + y) / (x^2 + y).
double ar1_ell(double y, double x);

struct LdpRates {
  TransformResult least_squares;  // I(x)
  TransformResult yule_walker;    // J(x)
};

/// Large-deviation rate functions of the least-squares and Yule-Walker
/// estimators of a stable Gaussian AR(1), |theta| < 1.
LdpRates ar1_ldp_rates(double x, double theta);

}  // namespace selfnorm::transforms
