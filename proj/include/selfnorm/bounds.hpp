#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "selfnorm/distributions.hpp"

namespace selfnorm::bounds {

enum class MgfFlavor { exact, numeric, upper_bound };

/// s -> E[exp(s Z)] for a nonnegative variation process Z (or an upper
/// bound of it), carried as a log-evaluator so that large negative
/// arguments do not underflow.
struct MgfHandle {
  std::function<double(double)> log_eval;
  Interval domain = Interval::real_line();
  MgfFlavor flavor = MgfFlavor::exact;

  [[nodiscard]] double log_value(double s) const;  // DomainError outside domain
  [[nodiscard]] double value(double s) const { return std::exp(log_value(s)); }

  /// Z identically equal to c.
  static MgfHandle deterministic(double c);
};

enum class Sided { one, two };

struct BoundResult {
  double raw = 0.0;
  double clamped = 0.0;
  std::optional<double> argmin_p;
  std::vector<std::string> notes;
};

BoundResult make_result(double raw);

/// Hoelder exponent range searched by optimize_p.
inline constexpr double kPMax = 1e8;
inline constexpr double kLogPMinusOneLo = -12.0;

struct POptimum {
  double p = 2.0;
  double value = 0.0;
  bool limit = false;  // still decreasing at p_max
};

/// inf over p in (1, p_max] of objective(p), searched in log(p - 1) by a
/// scan followed by golden-section refinement. Never returns more than
/// objective(2). Non-finite objective values are treated as +inf; throws
/// std::domain_error when no finite value is found.
POptimum optimize_p(const std::function<double(double)>& objective, double p_max = kPMax);

/// 2 exp(-2 x^2 / sum (b_k - a_k)^2) for increments in [a_k, b_k].
BoundResult azuma_hoeffding(double x, const std::vector<std::pair<double, double>>& ranges);
/// exp(-x^2 / (2 (y + c x))) on {M_n >= x, <M>_n <= y}, increments <= c.
BoundResult freedman(double x, double y, double c);
/// exp(-x^2 / (2 y)), doubled when two-sided.
BoundResult delapena(double x, double y, Sided sided);
/// 2 exp(-x^2 / (2 y)) on {|M_n| >= x, [M]_n + <M>_n <= y}.
BoundResult joint_variation_bound(double x, double y);
/// 2 exp(-x^2 (a b + b^2 y / 2)) on {|M_n| >= x (a + b <M>_n), <M>_n >= [M]_n + y}.
BoundResult lower_variation_bound(double x, double y, double a, double b);
/// {|M_n| / (a + b <M>_n) >= x, [M]_n <= y <M>_n}, Hoelder form with c = x^2 / (1 + y).
BoundResult variation_ratio_bound(double x, double y, double a, double b, const MgfHandle& qv_mgf);
/// One-sided joint bound for heavy-left increments.
BoundResult heavy_left_joint_bound(double x, double y);
/// M_n / (a + b [M]_n) >= x for heavy-left increments, Hoelder form with c = x^2.
BoundResult heavy_left_self_normalized(double x, double a, double b, const MgfHandle& tv_mgf);
/// exp(-x^2 (a b + b^2 y / 2)) on {M_n >= x (a + b [M]_n), [M]_n >= y}.
BoundResult heavy_left_with_floor(double x, double y, double a, double b);
/// {M_n / (a + b <M>_n) >= x, [M]_n <= y <M>_n} for heavy-left increments,
/// Hoelder form with c = x^2 / y.
BoundResult heavy_left_ratio(double x, double y, double a, double b, const MgfHandle& qv_mgf);
/// Sub-Gaussian increments with constant alpha, Hoelder form with c = x^2 / alpha^2.
BoundResult subgaussian_self_normalized(double x, double a, double b, double alpha,
                                        const MgfHandle& qv_mgf);

/// leading * inf_p (E[exp(-(p-1) c (a b + b^2 Z / 2))])^{1/p}: the shared
/// shape of every Hoelder-optimised self-normalised bound.
BoundResult holder_bound(double leading, double c, double a, double b, const MgfHandle& mgf);

}  // namespace selfnorm::bounds
