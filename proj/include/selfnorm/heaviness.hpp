#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "selfnorm/distributions.hpp"

namespace selfnorm::heaviness {

enum class Classification { heavy_left, heavy_right, symmetric, neither, inconclusive };

std::string_view to_string(Classification c) noexcept;

/// Outcome of scanning H(a) = -E[T_a(X)] over a grid of truncation levels.
struct HeavinessReport {
  Classification classification = Classification::inconclusive;
  std::vector<double> a_grid;   // strictly increasing, > 0
  std::vector<double> h_values; // aligned with a_grid
  double min_h = 0.0;
  double max_h = 0.0;
  double tolerance = 0.0;
  std::string note;  // set when the scan was inconclusive
};

struct GridPolicy {
  std::size_t points = 200;
  double lo_factor = 1e-3;  // grid starts at lo_factor * spread
  double hi_factor = 1e3;   // and ends at hi_factor * spread
  bool lattice_knots = true;
  std::vector<double> explicit_grid;  // overrides the geometric grid when non-empty
};

inline constexpr double kDefaultTolerance = 1e-9;

/// E[T_a(X)] with T_a(x) = min(|x|, a) sign(x), computed against the
/// mass/density of X.
double truncated_mean(const CenteredVariable& x, double a);

/// H(a) = int_0^a F(-u) - (1 - F(u-)) du, computed from the cdf of X.
double h_function(const CenteredVariable& x, double a);

/// H on a whole increasing grid, accumulating the integral panel by panel.
std::vector<double> h_curve(const CenteredVariable& x, const std::vector<double>& a_grid);

/// Lattice formula for Y on the nonnegative integers (X = Y - m):
/// H(a) = -a + sum_{k=[m-a]}^{[m+a]} s_k - s_[m+a] + {m+a} s_[m+a] - {m-a} s_[m-a],
/// with s_n = P(Y <= n), s_n = 0 for n < 0, [.] = floor and {x} = x - floor(x).
double h_closed_form_discrete(const Distribution& dist, double a);

struct ClosedFormCheck {
  double value = 0.0;    // generic value whenever the printed form disagrees
  double printed = 0.0;  // the closed form with a_m = min(m - a, 0)
  double generic = 0.0;  // h_function on the centered law
  bool discrepancy = false;
};

/// Density formula for Y >= 0:
/// H(a) = -a + 2a int_0^{a_m} g + int_{a_m}^{m+a} (m + a - x) g(x) dx,
/// a_m = min(m - a, 0), cross-checked against h_function (tolerance 1e-9).
ClosedFormCheck h_closed_form_continuous(const Distribution& dist, double a);

std::vector<double> default_grid(const CenteredVariable& x, const GridPolicy& policy);

HeavinessReport classify(const CenteredVariable& x, const GridPolicy& policy = {},
                         double eps = kDefaultTolerance);

/// 2 exp(-lambda) sum_{k=0}^{[lambda]} lambda^k / k! >= 1.
bool poisson_heavy_left_condition(double lambda);

/// L(t) = E[exp(tX - t^2 X^2 / 2)].
double lemma_L(const CenteredVariable& x, double t);

}  // namespace selfnorm::heaviness
