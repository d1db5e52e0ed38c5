#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace selfnorm {

/// Raised when an expectation or transform is requested outside the set where
/// the underlying moment exists (e.g. a cgf argument beyond its domain).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a numerical routine fails to reach its declared tolerance.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  [[nodiscard]] double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

namespace numeric {

using Integrand = std::function<double(double)>;

struct Quadrature {
  double value = 0.0;
  double error = 0.0;
};

inline constexpr double kAbsTol = 1e-12;
inline constexpr double kRelTol = 1e-10;

/// Integrates f over [lo, hi]; either limit may be infinite. Endpoint
/// singularities are tolerated (double-exponential rules). Throws
/// NumericalError when the error estimate exceeds max(kAbsTol, kRelTol*|I|)
/// by more than a factor of 100.
Quadrature integrate(const Integrand& f, double lo, double hi);

/// Same as integrate() but splits [lo, hi] at the knots that fall strictly
/// inside it, so kinks and jumps of f sit on panel boundaries.
Quadrature integrate_piecewise(const Integrand& f, double lo, double hi,
                               std::span<const double> knots);

struct Extremum {
  double arg = 0.0;
  double value = 0.0;
  bool at_lower = false;
  bool at_upper = false;
  double bracket = 0.0;  // width of the final bracket
};

/// Golden-section minimisation of a unimodal f on [lo, hi]. The endpoints
/// are compared against the interior optimum so a monotone objective
/// reports the boundary it runs into.
Extremum golden_section_min(const Integrand& f, double lo, double hi,
                            double rel_tol = 1e-10, int max_iter = 500);

/// Coarse scan over `points` equally spaced abscissae, then golden-section
/// inside the bracket around the best scan point. Used where unimodality
/// is expected but not guaranteed.
Extremum scan_then_golden(const Integrand& f, double lo, double hi,
                          std::size_t points = 64, double rel_tol = 1e-10);

}  // namespace numeric
}  // namespace selfnorm
