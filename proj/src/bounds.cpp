#include "selfnorm/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "selfnorm/numeric.hpp"

namespace selfnorm::bounds {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void nonnegative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be a nonnegative finite number");
  }
}

void strictly_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be positive");
  }
}

const char* flavor_note(MgfFlavor f) {
  switch (f) {
    case MgfFlavor::exact: return "mgf: exact";
    case MgfFlavor::numeric: return "mgf: numeric";
    case MgfFlavor::upper_bound: return "mgf: upper bound (result stays a valid bound)";
  }
  return "mgf: unknown";
}

}  // namespace

double MgfHandle::log_value(double s) const {
  if (!domain.contains(s)) {
    throw DomainError("mgf argument " + std::to_string(s) + " outside the handle's domain");
  }
  return log_eval(s);
}

MgfHandle MgfHandle::deterministic(double c) {
  return {[c](double s) { return s * c; }, Interval::real_line(), MgfFlavor::exact};
}

BoundResult make_result(double raw) {
  BoundResult r;
  r.raw = raw;
  r.clamped = std::min(raw, 1.0);
  return r;
}

POptimum optimize_p(const std::function<double(double)>& objective, double p_max) {
  if (!(p_max > 2.0)) throw std::invalid_argument("p_max must exceed 2");
  auto in_log = [&](double u) {
    double v = kInf;
    try {
      v = objective(1.0 + std::exp(u));
    } catch (const DomainError&) {
      return kInf;
    }
    return std::isfinite(v) ? v : kInf;
  };
  const double u_hi = std::log(p_max - 1.0);
  auto e = numeric::scan_then_golden(in_log, kLogPMinusOneLo, u_hi, 96, 1e-8);
  POptimum out{1.0 + std::exp(e.arg), e.value, e.at_upper};
  const double at_two = in_log(0.0);
  if (at_two < out.value) out = {2.0, at_two, false};
  if (!std::isfinite(out.value)) {
    throw std::domain_error("objective is not finite anywhere on (1, p_max]");
  }
  return out;
}

BoundResult holder_bound(double leading, double c, double a, double b, const MgfHandle& mgf) {
  nonnegative(a, "a");
  strictly_positive(b, "b");
  nonnegative(c, "x");
  if (c == 0.0) {
    auto r = make_result(leading);
    r.notes.emplace_back("x = 0: leading factor");
    return r;
  }
  auto log_objective = [&](double p) {
    const double k = (p - 1.0) * c;
    return (-k * a * b + mgf.log_value(-k * b * b / 2.0)) / p;
  };
  POptimum opt;
  try {
    opt = optimize_p([&](double p) { return log_objective(p); });
  } catch (const std::domain_error&) {
    throw DomainError("mgf handle is not finite at any required argument");
  }
  auto r = make_result(leading * std::exp(opt.value));
  r.argmin_p = opt.p;
  r.notes.emplace_back(flavor_note(mgf.flavor));
  if (opt.limit) r.notes.emplace_back("limit: infimum approached as p -> infinity");
  return r;
}

BoundResult azuma_hoeffding(double x, const std::vector<std::pair<double, double>>& ranges) {
  nonnegative(x, "x");
  if (ranges.empty()) throw std::invalid_argument("azuma_hoeffding needs at least one range");
  double spread = 0.0;
  for (const auto& [a, b] : ranges) {
    if (!(a < b)) throw std::invalid_argument("each range needs a_k < b_k");
    spread += (b - a) * (b - a);
  }
  auto r = make_result(2.0 * std::exp(-2.0 * x * x / spread));
  r.notes.emplace_back("event: |M_n| >= x");
  return r;
}

BoundResult freedman(double x, double y, double c) {
  nonnegative(x, "x");
  strictly_positive(y, "y");
  strictly_positive(c, "c");
  auto r = make_result(std::exp(-x * x / (2.0 * (y + c * x))));
  r.notes.emplace_back("event: M_n >= x, <M>_n <= y");
  return r;
}

BoundResult delapena(double x, double y, Sided sided) {
  nonnegative(x, "x");
  strictly_positive(y, "y");
  const double lead = sided == Sided::two ? 2.0 : 1.0;
  auto r = make_result(lead * std::exp(-x * x / (2.0 * y)));
  r.notes.emplace_back(sided == Sided::two ? "event: |M_n| >= x, [M]_n <= y"
                                           : "event: M_n >= x, [M]_n <= y");
  return r;
}

BoundResult joint_variation_bound(double x, double y) {
  auto r = delapena(x, y, Sided::two);
  r.notes = {"event: |M_n| >= x, [M]_n + <M>_n <= y"};
  return r;
}

BoundResult lower_variation_bound(double x, double y, double a, double b) {
  nonnegative(x, "x");
  strictly_positive(y, "y");
  nonnegative(a, "a");
  strictly_positive(b, "b");
  auto r = make_result(2.0 * std::exp(-x * x * (a * b + b * b * y / 2.0)));
  r.notes.emplace_back("event: |M_n|/(a + b<M>_n) >= x, <M>_n >= [M]_n + y");
  return r;
}

BoundResult variation_ratio_bound(double x, double y, double a, double b, const MgfHandle& qv_mgf) {
  strictly_positive(y, "y");
  auto r = holder_bound(2.0, x * x / (1.0 + y), a, b, qv_mgf);
  r.notes.emplace_back("event: |M_n|/(a + b<M>_n) >= x, [M]_n <= y<M>_n");
  return r;
}

BoundResult heavy_left_joint_bound(double x, double y) { return delapena(x, y, Sided::one); }

BoundResult heavy_left_self_normalized(double x, double a, double b, const MgfHandle& tv_mgf) {
  auto r = holder_bound(1.0, x * x, a, b, tv_mgf);
  r.notes.emplace_back("event: M_n/(a + b[M]_n) >= x; martingale heavy on left");
  return r;
}

BoundResult heavy_left_with_floor(double x, double y, double a, double b) {
  nonnegative(x, "x");
  strictly_positive(y, "y");
  nonnegative(a, "a");
  strictly_positive(b, "b");
  auto r = make_result(std::exp(-x * x * (a * b + b * b * y / 2.0)));
  r.notes.emplace_back("event: M_n/(a + b[M]_n) >= x, [M]_n >= y; martingale heavy on left");
  return r;
}

BoundResult heavy_left_ratio(double x, double y, double a, double b, const MgfHandle& qv_mgf) {
  strictly_positive(y, "y");
  auto r = holder_bound(1.0, x * x / y, a, b, qv_mgf);
  r.notes.emplace_back("event: M_n/(a + b<M>_n) >= x, [M]_n <= y<M>_n; heavy on left");
  return r;
}

BoundResult subgaussian_self_normalized(double x, double a, double b, double alpha,
                                        const MgfHandle& qv_mgf) {
  strictly_positive(alpha, "alpha");
  auto r = holder_bound(1.0, x * x / (alpha * alpha), a, b, qv_mgf);
  r.notes.emplace_back("event: M_n/(a + b<M>_n) >= x; sub-Gaussian martingale");
  return r;
}

}  // namespace selfnorm::bounds
