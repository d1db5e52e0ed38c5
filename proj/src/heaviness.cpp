#include "selfnorm/heaviness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace selfnorm::heaviness {
namespace {

void require_positive(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("truncation level a must be positive");
}

double h_integrand(const CenteredVariable& x, double u) { return x.cdf(-u) - x.sf_left(u); }

// Points in (lo, hi) where the integrand of H may jump or kink.
std::vector<double> h_knots(const CenteredVariable& x, double lo, double hi) {
  std::vector<double> knots;
  for (double b : x.breakpoints()) {
    const double u = std::abs(b);
    if (u > lo && u < hi) knots.push_back(u);
  }
  if (x.kind() == LawKind::continuous) {
    const double s = x.spread();
    for (double k = 0.25; k < 1e4; k *= 2.0) {
      if (k * s > lo && k * s < hi) knots.push_back(k * s);
    }
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  return knots;
}

// Integral of the H integrand over [lo, hi].
double h_increment(const CenteredVariable& x, double lo, double hi) {
  if (hi <= lo) return 0.0;
  const auto knots = h_knots(x, lo, hi);
  if (x.kind() == LawKind::discrete) {
    // The integrand is constant between consecutive |atoms|.
    double total = 0.0;
    double left = lo;
    auto panel = [&](double right) {
      total += (right - left) * h_integrand(x, 0.5 * (left + right));
      left = right;
    };
    for (double k : knots) panel(k);
    panel(hi);
    return total;
  }
  return numeric::integrate_piecewise([&](double u) { return h_integrand(x, u); }, lo, hi,
                                      knots)
      .value;
}

double s_index(const Distribution& dist, double n) { return n < 0.0 ? 0.0 : dist.cdf(n); }

}  // namespace

std::string_view to_string(Classification c) noexcept {
  switch (c) {
    case Classification::heavy_left: return "heavy-left";
    case Classification::heavy_right: return "heavy-right";
    case Classification::symmetric: return "symmetric";
    case Classification::neither: return "neither";
    case Classification::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

double truncated_mean(const CenteredVariable& x, double a) {
  require_positive(a);
  return x.expect([a](double v) { return std::clamp(v, -a, a); }, {-a, 0.0, a});
}

double h_function(const CenteredVariable& x, double a) {
  require_positive(a);
  return h_increment(x, 0.0, a);
}

std::vector<double> h_curve(const CenteredVariable& x, const std::vector<double>& a_grid) {
  std::vector<double> out;
  out.reserve(a_grid.size());
  double prev = 0.0;
  double h = 0.0;
  for (double a : a_grid) {
    require_positive(a);
    if (a < prev) throw std::invalid_argument("a-grid must be increasing");
    h += h_increment(x, prev, a);
    out.push_back(h);
    prev = a;
  }
  return out;
}

double h_closed_form_discrete(const Distribution& dist, double a) {
  require_positive(a);
  const Support s = dist.support();
  const bool integer_valued = [&] {
    if (!s.lattice || s.lower < 0.0) return false;
    if (const auto* c = std::get_if<law::Constant>(&dist.law())) {
      return c->value == std::floor(c->value);
    }
    return true;
  }();
  if (!integer_valued) {
    throw std::invalid_argument("closed-form H needs a law on the nonnegative integers");
  }
  const double m = dist.mean();
  const double lo = std::floor(m - a);
  const double hi = std::floor(m + a);
  double sum = 0.0;
  for (double k = std::max(lo, 0.0); k <= hi; k += 1.0) sum += dist.cdf(k);
  const double frac_hi = (m + a) - hi;
  const double frac_lo = (m - a) - lo;
  return -a + sum - s_index(dist, hi) + frac_hi * s_index(dist, hi) -
         frac_lo * s_index(dist, lo);
}

ClosedFormCheck h_closed_form_continuous(const Distribution& dist, double a) {
  require_positive(a);
  if (dist.kind() != LawKind::continuous) {
    throw std::invalid_argument("closed-form H needs a law with a density");
  }
  const Support s = dist.support();
  if (s.lower < 0.0) throw std::invalid_argument("closed-form H needs a law on [0, inf)");
  const double m = dist.mean();
  if (!std::isfinite(m)) throw std::invalid_argument(dist.name() + " has no finite mean");

  const double a_m = std::min(m - a, 0.0);
  const double mass_to_am = a_m > 0.0 ? dist.cdf(a_m) : 0.0;
  std::vector<double> knots{s.lower, m};
  const double lower = std::max(a_m, s.lower);
  const double tail = numeric::integrate_piecewise(
                          [&](double v) { return (m + a - v) * dist.mass_or_density(v); }, lower,
                          m + a, knots)
                          .value;

  ClosedFormCheck out;
  out.printed = -a + 2.0 * a * mass_to_am + tail;
  out.generic = h_function(centered(dist), a);
  out.discrepancy = std::abs(out.printed - out.generic) > kDefaultTolerance;
  out.value = out.discrepancy ? out.generic : out.printed;
  return out;
}

std::vector<double> default_grid(const CenteredVariable& x, const GridPolicy& policy) {
  std::vector<double> grid;
  if (!policy.explicit_grid.empty()) {
    grid = policy.explicit_grid;
  } else {
    const double s = x.spread();
    const double lo = policy.lo_factor * s;
    const double hi = policy.hi_factor * s;
    const std::size_t n = std::max<std::size_t>(policy.points, 2);
    const double ratio = std::log(hi / lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) grid.push_back(lo * std::exp(ratio * static_cast<double>(i)));
    grid.back() = hi;
    if (policy.lattice_knots && x.kind() == LawKind::discrete) {
      for (double b : x.breakpoints()) {
        const double u = std::abs(b);
        if (u >= lo && u <= hi) grid.push_back(u);
      }
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  grid.erase(std::remove_if(grid.begin(), grid.end(), [](double a) { return !(a > 0.0); }),
             grid.end());
  return grid;
}

HeavinessReport classify(const CenteredVariable& x, const GridPolicy& policy, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("tolerance must be positive");
  HeavinessReport r;
  r.tolerance = eps;
  r.a_grid = default_grid(x, policy);
  try {
    r.h_values = h_curve(x, r.a_grid);
  } catch (const NumericalError& e) {
    r.classification = Classification::inconclusive;
    r.note = e.what();
    r.h_values.clear();
    return r;
  }
  const auto [lo, hi] = std::minmax_element(r.h_values.begin(), r.h_values.end());
  r.min_h = *lo;
  r.max_h = *hi;
  const bool left = r.min_h >= -eps;
  const bool right = r.max_h <= eps;
  if (left && right) {
    r.classification = Classification::symmetric;
  } else if (left) {
    r.classification = Classification::heavy_left;
  } else if (right) {
    r.classification = Classification::heavy_right;
  } else {
    r.classification = Classification::neither;
  }
  return r;
}

bool poisson_heavy_left_condition(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  double sum = 0.0;
  const double kmax = std::floor(lambda);
  for (double k = 0.0; k <= kmax; k += 1.0) {
    sum += std::exp(k * std::log(lambda) - std::lgamma(k + 1.0));
  }
  return 2.0 * std::exp(-lambda) * sum >= 1.0;
}

double lemma_L(const CenteredVariable& x, double t) {
  if (t == 0.0) return 1.0;
  auto f = [t](double v) { return std::exp(t * v - 0.5 * t * t * v * v); };
  const double peak = 1.0 / t;
  return x.expect(f, {0.0, peak, 2.0 * peak, -peak, 4.0 * peak, -4.0 * peak});
}

}  // namespace selfnorm::heaviness
