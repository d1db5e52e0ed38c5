#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "selfnorm/numeric.hpp"
#include "selfnorm/random.hpp"

namespace selfnorm {

enum class LawKind { discrete, continuous };

/// Interval of real numbers with optionally open endpoints; endpoints may be
/// infinite.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_open = false;
  bool hi_open = false;

  [[nodiscard]] bool contains(double t) const noexcept;
  static Interval real_line();
};

struct Support {
  double lower = 0.0;  // may be -inf
  double upper = 0.0;  // may be +inf
  bool lattice = false;  // atoms on the integers
};

using ParamList = std::map<std::string, double, std::less<>>;

namespace law {
struct Bernoulli { double p; };
struct Geometric { double p; bool from_one; };  // from_one: support {1,2,...}
struct Poisson { double lambda; };
struct Constant { double value; };
struct Exponential { double lambda; };
struct Gamma { double shape; double rate; };
struct Pareto { double scale; double lambda; };  // Y = scale * exp(Z), Z ~ Exp(lambda)
struct LogNormal { double m; double sigma2; };   // Y = exp(Z), Z ~ N(m, sigma2)
struct Normal { double m; double sigma2; };
}  // namespace law

/// A univariate probability law from the catalog: mass/density, cdf,
/// moments, sampling and cumulant generating function. Immutable; all
/// evaluators are pure.
class Distribution {
 public:
  using Law = std::variant<law::Bernoulli, law::Geometric, law::Poisson, law::Constant,
                           law::Exponential, law::Gamma, law::Pareto, law::LogNormal,
                           law::Normal>;

  Distribution(std::string name, Law law, ParamList params);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] const ParamList& params() const noexcept { return params_; }
  [[nodiscard]] const Law& law() const noexcept { return law_; }
  [[nodiscard]] LawKind kind() const noexcept;

  /// pmf for discrete laws, density for continuous ones.
  [[nodiscard]] double mass_or_density(double y) const;
  /// P(Y <= y).
  [[nodiscard]] double cdf(double y) const;
  /// P(Y < y), the left limit of the cdf.
  [[nodiscard]] double cdf_left(double y) const;
  /// P(Y > y), evaluated without cancellation in the upper tail.
  [[nodiscard]] double sf(double y) const;
  /// P(Y >= y).
  [[nodiscard]] double sf_left(double y) const;

  /// +inf when the mean does not exist.
  [[nodiscard]] double mean() const;
  /// +inf when the second moment does not exist.
  [[nodiscard]] double variance() const;
  /// Standard deviation when finite, otherwise the law's own scale parameter.
  [[nodiscard]] double scale() const;
  [[nodiscard]] Support support() const;

  [[nodiscard]] Interval cgf_domain() const;
  [[nodiscard]] bool has_closed_form_cgf() const noexcept;
  /// log E[exp(tY)]; DomainError outside cgf_domain().
  [[nodiscard]] double cgf(double t) const;

  /// Atoms (value, probability) of a discrete law, truncated once the
  /// remaining upper-tail mass is below `tail`.
  [[nodiscard]] std::vector<std::pair<double, double>> atoms(double tail = 1e-17) const;

  /// E[f(Y)] by exact summation (discrete) or quadrature (continuous). The
  /// knots, given on the Y scale, are added to the quadrature breakpoints.
  [[nodiscard]] double expect(const std::function<double(double)>& f,
                              std::vector<double> knots = {}) const;

  [[nodiscard]] double draw(Rng& rng) const;
  /// Sum of `count` independent draws, using closed-form convolutions where
  /// the catalog has one.
  [[nodiscard]] double draw_sum(std::uint64_t count, Rng& rng) const;

 private:
  std::string name_;
  Law law_;
  ParamList params_;
};

/// Builds a catalog law. Names: bernoulli(p), geometric(p[, support=1|0]),
/// poisson(lambda), constant(value), exponential(lambda), gamma(a, lambda),
/// pareto(a, lambda), lognormal(m, sigma2), normal(m, sigma2).
/// Throws std::invalid_argument on unknown names, missing or out-of-range
/// parameters.
Distribution make_distribution(std::string_view name, const ParamList& params);

/// Parses "name:key=value,key=value" descriptors.
Distribution parse_distribution(std::string_view descriptor);

/// The variable X = scale * (Y - shift). Built by centered(), so shift is
/// the mean of Y; scale lets the same object describe cX (c != 0), which
/// covers -X and fixed-regressor products.
class CenteredVariable {
 public:
  [[nodiscard]] const Distribution& base() const noexcept { return base_; }
  [[nodiscard]] double shift() const noexcept { return shift_; }
  [[nodiscard]] double scale() const noexcept { return scale_; }
  [[nodiscard]] CenteredVariable scaled(double c) const;

  [[nodiscard]] LawKind kind() const noexcept { return base_.kind(); }
  [[nodiscard]] double cdf(double x) const;
  [[nodiscard]] double cdf_left(double x) const;
  [[nodiscard]] double sf(double x) const;
  [[nodiscard]] double sf_left(double x) const;
  [[nodiscard]] double variance() const;
  /// Standard deviation, or |scale| times the base law's scale parameter.
  [[nodiscard]] double spread() const;

  /// Atoms of X for discrete bases.
  [[nodiscard]] std::vector<std::pair<double, double>> atoms(double tail = 1e-17) const;
  /// Points on the X scale where the law has a kink or an edge of support.
  [[nodiscard]] std::vector<double> breakpoints() const;

  /// E[f(X)]; knots are on the X scale.
  [[nodiscard]] double expect(const std::function<double(double)>& f,
                              std::vector<double> knots = {}) const;
  /// log E[exp(tX)].
  [[nodiscard]] double cgf(double t) const;
  [[nodiscard]] Interval cgf_domain() const;
  [[nodiscard]] double draw(Rng& rng) const;

 private:
  friend CenteredVariable centered(const Distribution&);
  CenteredVariable(Distribution base, double shift, double scale);
  [[nodiscard]] double to_base(double x) const noexcept { return shift_ + x / scale_; }

  Distribution base_;
  double shift_;
  double scale_;
};

/// X = Y - E[Y]; throws std::invalid_argument when the mean is infinite.
CenteredVariable centered(const Distribution& dist);

/// log E[exp(t * Y^2)] for a catalog law (closed form for normal and for
/// finite discrete laws, quadrature otherwise). Domain errors as cgf().
double square_cgf(const Distribution& dist, double t);
/// Same quantity always computed by quadrature/summation.
double square_cgf_numeric(const Distribution& dist, double t);
/// log E[exp(t * X^2)] for a centered variable.
double square_cgf(const CenteredVariable& x, double t);

/// n i.i.d. draws from the given substream.
std::vector<double> sample(const Distribution& dist, const Substream& stream,
                           std::size_t count);

}  // namespace selfnorm
