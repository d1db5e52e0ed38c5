#include "selfnorm/distributions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace selfnorm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double normal_density(double y, double m, double sigma2) {
  const double z = y - m;
  return std::exp(-z * z / (2.0 * sigma2)) / std::sqrt(2.0 * std::numbers::pi * sigma2);
}

double poisson_log_pmf(double k, double lambda) {
  return k * std::log(lambda) - lambda - std::lgamma(k + 1.0);
}

double require(const ParamList& params, std::string_view key) {
  auto it = params.find(key);
  if (it == params.end()) {
    throw std::invalid_argument("missing parameter '" + std::string(key) + "'");
  }
  return it->second;
}

double optional_param(const ParamList& params, std::string_view key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void allow_only(const ParamList& params, std::initializer_list<std::string_view> keys,
                std::string_view name) {
  for (const auto& [k, v] : params) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw std::invalid_argument("unknown parameter '" + k + "' for " + std::string(name));
    }
  }
}

void positive(double v, std::string_view what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be a positive finite number");
  }
}

void probability(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0, 1)");
}

double log_expectation(const Distribution& dist, const std::function<double(double)>& f) {
  const double v = dist.expect(f);
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw NumericalError("moment generating function evaluated to " + std::to_string(v), v);
  }
  return std::log(v);
}

}  // namespace

bool Interval::contains(double t) const noexcept {
  const bool above = lo_open ? t > lo : t >= lo;
  const bool below = hi_open ? t < hi : t <= hi;
  return above && below;
}

Interval Interval::real_line() { return {-kInf, kInf, true, true}; }

Distribution::Distribution(std::string name, Law law, ParamList params)
    : name_(std::move(name)), law_(law), params_(std::move(params)) {}

LawKind Distribution::kind() const noexcept {
  return std::visit(overloaded{[](const law::Bernoulli&) { return LawKind::discrete; },
                               [](const law::Geometric&) { return LawKind::discrete; },
                               [](const law::Poisson&) { return LawKind::discrete; },
                               [](const law::Constant&) { return LawKind::discrete; },
                               [](const auto&) { return LawKind::continuous; }},
                    law_);
}

double Distribution::mass_or_density(double y) const {
  return std::visit(
      overloaded{
          [&](const law::Bernoulli& l) { return y == 0.0 ? 1.0 - l.p : y == 1.0 ? l.p : 0.0; },
          [&](const law::Geometric& l) {
            const double first = l.from_one ? 1.0 : 0.0;
            if (y < first || y != std::floor(y)) return 0.0;
            return l.p * std::pow(1.0 - l.p, y - first);
          },
          [&](const law::Poisson& l) {
            if (y < 0.0 || y != std::floor(y)) return 0.0;
            return std::exp(poisson_log_pmf(y, l.lambda));
          },
          [&](const law::Constant& l) { return y == l.value ? 1.0 : 0.0; },
          [&](const law::Exponential& l) { return y < 0.0 ? 0.0 : l.lambda * std::exp(-l.lambda * y); },
          [&](const law::Gamma& l) {
            if (y <= 0.0) return 0.0;
            return l.rate * boost::math::gamma_p_derivative(l.shape, l.rate * y);
          },
          [&](const law::Pareto& l) {
            if (y < l.scale) return 0.0;
            return l.lambda / y * std::pow(y / l.scale, -l.lambda);
          },
          [&](const law::LogNormal& l) {
            if (y <= 0.0) return 0.0;
            return normal_density(std::log(y), l.m, l.sigma2) / y;
          },
          [&](const law::Normal& l) { return normal_density(y, l.m, l.sigma2); }},
      law_);
}

double Distribution::sf(double y) const {
  return std::visit(
      overloaded{
          [&](const law::Bernoulli& l) { return y < 0.0 ? 1.0 : y < 1.0 ? l.p : 0.0; },
          [&](const law::Geometric& l) {
            const double first = l.from_one ? 1.0 : 0.0;
            if (y < first) return 1.0;
            return std::pow(1.0 - l.p, std::floor(y) - first + 1.0);
          },
          [&](const law::Poisson& l) {
            if (y < 0.0) return 1.0;
            return boost::math::gamma_p(std::floor(y) + 1.0, l.lambda);
          },
          [&](const law::Constant& l) { return y < l.value ? 1.0 : 0.0; },
          [&](const law::Exponential& l) { return y <= 0.0 ? 1.0 : std::exp(-l.lambda * y); },
          [&](const law::Gamma& l) {
            return y <= 0.0 ? 1.0 : boost::math::gamma_q(l.shape, l.rate * y);
          },
          [&](const law::Pareto& l) {
            return y <= l.scale ? 1.0 : std::pow(y / l.scale, -l.lambda);
          },
          [&](const law::LogNormal& l) {
            return y <= 0.0 ? 1.0 : normal_sf((std::log(y) - l.m) / std::sqrt(l.sigma2));
          },
          [&](const law::Normal& l) { return normal_sf((y - l.m) / std::sqrt(l.sigma2)); }},
      law_);
}

double Distribution::cdf(double y) const {
  return std::visit(
      overloaded{
          [&](const law::Bernoulli& l) { return y < 0.0 ? 0.0 : y < 1.0 ? 1.0 - l.p : 1.0; },
          [&](const law::Geometric& l) {
            const double first = l.from_one ? 1.0 : 0.0;
            if (y < first) return 0.0;
            return -std::expm1((std::floor(y) - first + 1.0) * std::log1p(-l.p));
          },
          [&](const law::Poisson& l) {
            if (y < 0.0) return 0.0;
            return boost::math::gamma_q(std::floor(y) + 1.0, l.lambda);
          },
          [&](const law::Constant& l) { return y < l.value ? 0.0 : 1.0; },
          [&](const law::Exponential& l) { return y <= 0.0 ? 0.0 : -std::expm1(-l.lambda * y); },
          [&](const law::Gamma& l) {
            return y <= 0.0 ? 0.0 : boost::math::gamma_p(l.shape, l.rate * y);
          },
          [&](const law::Pareto& l) {
            return y <= l.scale ? 0.0 : -std::expm1(-l.lambda * std::log(y / l.scale));
          },
          [&](const law::LogNormal& l) {
            return y <= 0.0 ? 0.0 : normal_cdf((std::log(y) - l.m) / std::sqrt(l.sigma2));
          },
          [&](const law::Normal& l) { return normal_cdf((y - l.m) / std::sqrt(l.sigma2)); }},
      law_);
}

double Distribution::cdf_left(double y) const {
  if (kind() == LawKind::continuous) return cdf(y);
  if (const auto* c = std::get_if<law::Constant>(&law_)) return y <= c->value ? 0.0 : 1.0;
  return cdf(std::ceil(y) - 1.0);
}

double Distribution::sf_left(double y) const {
  if (kind() == LawKind::continuous) return sf(y);
  if (const auto* c = std::get_if<law::Constant>(&law_)) return y <= c->value ? 1.0 : 0.0;
  return sf(std::ceil(y) - 1.0);
}

double Distribution::mean() const {
  return std::visit(
      overloaded{[](const law::Bernoulli& l) { return l.p; },
                 [](const law::Geometric& l) {
                   return l.from_one ? 1.0 / l.p : (1.0 - l.p) / l.p;
                 },
                 [](const law::Poisson& l) { return l.lambda; },
                 [](const law::Constant& l) { return l.value; },
                 [](const law::Exponential& l) { return 1.0 / l.lambda; },
                 [](const law::Gamma& l) { return l.shape / l.rate; },
                 [](const law::Pareto& l) {
                   return l.lambda > 1.0 ? l.scale * l.lambda / (l.lambda - 1.0) : kInf;
                 },
                 [](const law::LogNormal& l) { return std::exp(l.m + 0.5 * l.sigma2); },
                 [](const law::Normal& l) { return l.m; }},
      law_);
}

double Distribution::variance() const {
  return std::visit(
      overloaded{[](const law::Bernoulli& l) { return l.p * (1.0 - l.p); },
                 [](const law::Geometric& l) { return (1.0 - l.p) / (l.p * l.p); },
                 [](const law::Poisson& l) { return l.lambda; },
                 [](const law::Constant&) { return 0.0; },
                 [](const law::Exponential& l) { return 1.0 / (l.lambda * l.lambda); },
                 [](const law::Gamma& l) { return l.shape / (l.rate * l.rate); },
                 [](const law::Pareto& l) {
                   if (l.lambda <= 2.0) return kInf;
                   const double m = l.scale * l.lambda / (l.lambda - 1.0);
                   return l.scale * l.scale * l.lambda / (l.lambda - 2.0) - m * m;
                 },
                 [](const law::LogNormal& l) {
                   return std::expm1(l.sigma2) * std::exp(2.0 * l.m + l.sigma2);
                 },
                 [](const law::Normal& l) { return l.sigma2; }},
      law_);
}

double Distribution::scale() const {
  const double v = variance();
  if (std::isfinite(v) && v > 0.0) return std::sqrt(v);
  if (const auto* p = std::get_if<law::Pareto>(&law_)) return p->scale;
  return 1.0;
}

Support Distribution::support() const {
  return std::visit(
      overloaded{[](const law::Bernoulli&) { return Support{0.0, 1.0, true}; },
                 [](const law::Geometric& l) { return Support{l.from_one ? 1.0 : 0.0, kInf, true}; },
                 [](const law::Poisson&) { return Support{0.0, kInf, true}; },
                 [](const law::Constant& l) { return Support{l.value, l.value, true}; },
                 [](const law::Pareto& l) { return Support{l.scale, kInf, false}; },
                 [](const law::Normal&) { return Support{-kInf, kInf, false}; },
                 [](const auto&) { return Support{0.0, kInf, false}; }},
      law_);
}

Interval Distribution::cgf_domain() const {
  return std::visit(
      overloaded{[](const law::Geometric& l) {
                   return Interval{-kInf, -std::log1p(-l.p), true, true};
                 },
                 [](const law::Exponential& l) { return Interval{-kInf, l.lambda, true, true}; },
                 [](const law::Gamma& l) { return Interval{-kInf, l.rate, true, true}; },
                 [](const law::Pareto&) { return Interval{-kInf, 0.0, true, false}; },
                 [](const law::LogNormal&) { return Interval{-kInf, 0.0, true, false}; },
                 [](const auto&) { return Interval::real_line(); }},
      law_);
}

bool Distribution::has_closed_form_cgf() const noexcept {
  return !std::holds_alternative<law::Pareto>(law_) &&
         !std::holds_alternative<law::LogNormal>(law_);
}

double Distribution::cgf(double t) const {
  if (!cgf_domain().contains(t)) {
    throw DomainError("cgf argument " + std::to_string(t) + " outside the domain of " + name_);
  }
  if (t == 0.0) return 0.0;
  return std::visit(
      overloaded{[&](const law::Bernoulli& l) { return std::log1p(l.p * std::expm1(t)); },
                 [&](const law::Geometric& l) {
                   const double q = 1.0 - l.p;
                   const double base = std::log(l.p) - std::log1p(-q * std::exp(t));
                   return l.from_one ? base + t : base;
                 },
                 [&](const law::Poisson& l) { return l.lambda * std::expm1(t); },
                 [&](const law::Constant& l) { return l.value * t; },
                 [&](const law::Exponential& l) { return -std::log1p(-t / l.lambda); },
                 [&](const law::Gamma& l) { return -l.shape * std::log1p(-t / l.rate); },
                 [&](const law::Normal& l) { return l.m * t + 0.5 * l.sigma2 * t * t; },
                 [&](const auto&) {
                   return log_expectation(*this, [t](double y) { return std::exp(t * y); });
                 }},
      law_);
}

std::vector<std::pair<double, double>> Distribution::atoms(double tail) const {
  std::vector<std::pair<double, double>> out;
  std::visit(overloaded{[&](const law::Bernoulli& l) {
                          out = {{0.0, 1.0 - l.p}, {1.0, l.p}};
                        },
                        [&](const law::Constant& l) { out = {{l.value, 1.0}}; },
                        [&](const law::Geometric& l) {
                          const double first = l.from_one ? 1.0 : 0.0;
                          for (double k = first;; k += 1.0) {
                            out.emplace_back(k, mass_or_density(k));
                            if (sf(k) < tail) break;
                          }
                        },
                        [&](const law::Poisson& l) {
                          for (double k = 0.0;; k += 1.0) {
                            out.emplace_back(k, mass_or_density(k));
                            if (k > l.lambda && sf(k) < tail) break;
                          }
                        },
                        [&](const auto&) {
                          throw std::logic_error("atoms() requested for a continuous law");
                        }},
             law_);
  return out;
}

double Distribution::expect(const std::function<double(double)>& f,
                            std::vector<double> knots) const {
  if (kind() == LawKind::discrete) {
    double total = 0.0;
    for (const auto& [y, p] : atoms()) total += p * f(y);
    return total;
  }
  const Support s = support();
  const double m = mean();
  const double sd = scale();
  if (std::isfinite(m)) {
    knots.push_back(m);
    for (double k : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 64.0}) {
      knots.push_back(m + k * sd);
      knots.push_back(m - k * sd);
    }
  }
  if (const auto* ln = std::get_if<law::LogNormal>(&law_)) {
    const double sd_log = std::sqrt(ln->sigma2);
    for (double k : {-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0}) {
      knots.push_back(std::exp(ln->m + k * sd_log));
    }
  }
  if (const auto* pa = std::get_if<law::Pareto>(&law_)) {
    for (double k : {2.0, 4.0, 16.0, 256.0}) knots.push_back(pa->scale * k);
  }
  auto integrand = [&](double y) {
    const double g = mass_or_density(y);
    return g == 0.0 ? 0.0 : f(y) * g;
  };
  return numeric::integrate_piecewise(integrand, s.lower, s.upper, knots).value;
}

double Distribution::draw(Rng& rng) const {
  return std::visit(
      overloaded{
          [&](const law::Bernoulli& l) { return std::bernoulli_distribution(l.p)(rng) ? 1.0 : 0.0; },
          [&](const law::Geometric& l) {
            const auto failures = std::geometric_distribution<long long>(l.p)(rng);
            return static_cast<double>(failures) + (l.from_one ? 1.0 : 0.0);
          },
          [&](const law::Poisson& l) {
            return static_cast<double>(std::poisson_distribution<long long>(l.lambda)(rng));
          },
          [&](const law::Constant& l) { return l.value; },
          [&](const law::Exponential& l) { return std::exponential_distribution<double>(l.lambda)(rng); },
          [&](const law::Gamma& l) {
            return std::gamma_distribution<double>(l.shape, 1.0 / l.rate)(rng);
          },
          [&](const law::Pareto& l) {
            return l.scale * std::exp(std::exponential_distribution<double>(l.lambda)(rng));
          },
          [&](const law::LogNormal& l) {
            return std::lognormal_distribution<double>(l.m, std::sqrt(l.sigma2))(rng);
          },
          [&](const law::Normal& l) {
            return std::normal_distribution<double>(l.m, std::sqrt(l.sigma2))(rng);
          }},
      law_);
}

double Distribution::draw_sum(std::uint64_t count, Rng& rng) const {
  if (count == 0) return 0.0;
  const auto n = static_cast<long long>(count);
  return std::visit(
      overloaded{
          [&](const law::Bernoulli& l) {
            return static_cast<double>(std::binomial_distribution<long long>(n, l.p)(rng));
          },
          [&](const law::Geometric& l) {
            const auto failures = std::negative_binomial_distribution<long long>(n, l.p)(rng);
            return static_cast<double>(failures) + (l.from_one ? static_cast<double>(n) : 0.0);
          },
          [&](const law::Poisson& l) {
            return static_cast<double>(
                std::poisson_distribution<long long>(l.lambda * static_cast<double>(n))(rng));
          },
          [&](const law::Constant& l) { return l.value * static_cast<double>(n); },
          [&](const law::Exponential& l) {
            return std::gamma_distribution<double>(static_cast<double>(n), 1.0 / l.lambda)(rng);
          },
          [&](const law::Gamma& l) {
            return std::gamma_distribution<double>(l.shape * static_cast<double>(n), 1.0 / l.rate)(rng);
          },
          [&](const law::Normal& l) {
            const double k = static_cast<double>(n);
            return std::normal_distribution<double>(l.m * k, std::sqrt(l.sigma2 * k))(rng);
          },
          [&](const auto&) {
            double total = 0.0;
            for (std::uint64_t i = 0; i < count; ++i) total += draw(rng);
            return total;
          }},
      law_);
}

Distribution make_distribution(std::string_view name, const ParamList& params) {
  const std::string n(name);
  if (name == "bernoulli") {
    allow_only(params, {"p"}, name);
    const double p = require(params, "p");
    probability(p);
    return {n, law::Bernoulli{p}, params};
  }
  if (name == "geometric") {
    allow_only(params, {"p", "support"}, name);
    const double p = require(params, "p");
    probability(p);
    const double first = optional_param(params, "support", 1.0);
    if (first != 0.0 && first != 1.0) {
      throw std::invalid_argument("geometric support must start at 0 or 1");
    }
    return {n, law::Geometric{p, first == 1.0}, params};
  }
  if (name == "poisson") {
    allow_only(params, {"lambda"}, name);
    const double lambda = require(params, "lambda");
    positive(lambda, "lambda");
    return {n, law::Poisson{lambda}, params};
  }
  if (name == "constant") {
    allow_only(params, {"value"}, name);
    const double v = require(params, "value");
    if (!std::isfinite(v)) throw std::invalid_argument("value must be finite");
    return {n, law::Constant{v}, params};
  }
  if (name == "exponential") {
    allow_only(params, {"lambda"}, name);
    const double lambda = require(params, "lambda");
    positive(lambda, "lambda");
    return {n, law::Exponential{lambda}, params};
  }
  if (name == "gamma") {
    allow_only(params, {"a", "lambda"}, name);
    const double a = require(params, "a");
    const double lambda = require(params, "lambda");
    positive(a, "a");
    positive(lambda, "lambda");
    return {n, law::Gamma{a, lambda}, params};
  }
  if (name == "pareto") {
    allow_only(params, {"a", "lambda"}, name);
    const double a = require(params, "a");
    const double lambda = require(params, "lambda");
    positive(a, "a");
    positive(lambda, "lambda");
    return {n, law::Pareto{a, lambda}, params};
  }
  if (name == "lognormal" || name == "normal") {
    allow_only(params, {"m", "sigma2"}, name);
    const double m = optional_param(params, "m", 0.0);
    const double s2 = require(params, "sigma2");
    if (!std::isfinite(m)) throw std::invalid_argument("m must be finite");
    positive(s2, "sigma2");
    if (name == "normal") return {n, law::Normal{m, s2}, params};
    return {n, law::LogNormal{m, s2}, params};
  }
  throw std::invalid_argument("unknown distribution '" + n + "'");
}

Distribution parse_distribution(std::string_view descriptor) {
  const auto colon = descriptor.find(':');
  const auto name = descriptor.substr(0, colon);
  ParamList params;
  if (colon != std::string_view::npos) {
    auto rest = descriptor.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto item = rest.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw std::invalid_argument("malformed parameter '" + std::string(item) +
                                    "' (expected key=value)");
      }
      const auto key = item.substr(0, eq);
      const auto text = item.substr(eq + 1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("parameter '" + std::string(key) + "' is not a number");
      }
      params[std::string(key)] = v;
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  return make_distribution(name, params);
}

// --- CenteredVariable -------------------------------------------------------

CenteredVariable::CenteredVariable(Distribution base, double shift, double scale)
    : base_(std::move(base)), shift_(shift), scale_(scale) {}

CenteredVariable centered(const Distribution& dist) {
  const double m = dist.mean();
  if (!std::isfinite(m)) {
    throw std::invalid_argument(dist.name() + " has no finite mean and cannot be centered");
  }
  return CenteredVariable(dist, m, 1.0);
}

CenteredVariable CenteredVariable::scaled(double c) const {
  if (c == 0.0 || !std::isfinite(c)) throw std::invalid_argument("scale factor must be nonzero");
  return CenteredVariable(base_, shift_, scale_ * c);
}

double CenteredVariable::cdf(double x) const {
  const double y = to_base(x);
  return scale_ > 0.0 ? base_.cdf(y) : base_.sf_left(y);
}

double CenteredVariable::cdf_left(double x) const {
  const double y = to_base(x);
  return scale_ > 0.0 ? base_.cdf_left(y) : base_.sf(y);
}

double CenteredVariable::sf(double x) const {
  const double y = to_base(x);
  return scale_ > 0.0 ? base_.sf(y) : base_.cdf_left(y);
}

double CenteredVariable::sf_left(double x) const {
  const double y = to_base(x);
  return scale_ > 0.0 ? base_.sf_left(y) : base_.cdf(y);
}

double CenteredVariable::variance() const { return scale_ * scale_ * base_.variance(); }

double CenteredVariable::spread() const {
  const double v = variance();
  if (std::isfinite(v) && v > 0.0) return std::sqrt(v);
  return std::abs(scale_) * base_.scale();
}

std::vector<std::pair<double, double>> CenteredVariable::atoms(double tail) const {
  auto out = base_.atoms(tail);
  for (auto& [v, p] : out) v = scale_ * (v - shift_);
  return out;
}

std::vector<double> CenteredVariable::breakpoints() const {
  std::vector<double> out;
  if (kind() == LawKind::discrete) {
    for (const auto& [v, p] : atoms()) out.push_back(v);
  } else {
    const Support s = base_.support();
    if (std::isfinite(s.lower)) out.push_back(scale_ * (s.lower - shift_));
    if (std::isfinite(s.upper)) out.push_back(scale_ * (s.upper - shift_));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double CenteredVariable::expect(const std::function<double(double)>& f,
                                std::vector<double> knots) const {
  for (double& k : knots) k = to_base(k);
  return base_.expect([&](double y) { return f(scale_ * (y - shift_)); }, std::move(knots));
}

Interval CenteredVariable::cgf_domain() const {
  const Interval d = base_.cgf_domain();
  if (scale_ > 0.0) return {d.lo / scale_, d.hi / scale_, d.lo_open, d.hi_open};
  return {d.hi / scale_, d.lo / scale_, d.hi_open, d.lo_open};
}

double CenteredVariable::cgf(double t) const {
  return base_.cgf(scale_ * t) - scale_ * t * shift_;
}

double CenteredVariable::draw(Rng& rng) const { return scale_ * (base_.draw(rng) - shift_); }

// --- Squared laws -----------------------------------------------------------

double square_cgf_numeric(const Distribution& dist, double t) {
  if (t == 0.0) return 0.0;
  const Support s = dist.support();
  const bool bounded = std::isfinite(s.lower) && std::isfinite(s.upper);
  if (const auto* n = std::get_if<law::Normal>(&dist.law())) {
    if (!(2.0 * n->sigma2 * t < 1.0)) {
      throw DomainError("E[exp(tY^2)] diverges for t >= 1/(2 sigma2)");
    }
  } else if (t > 0.0 && !bounded) {
    throw DomainError("E[exp(tY^2)] diverges for t > 0 on an unbounded support");
  }
  return log_expectation(dist, [t](double y) { return std::exp(t * y * y); });
}

double square_cgf(const Distribution& dist, double t) {
  if (const auto* n = std::get_if<law::Normal>(&dist.law())) {
    const double d = 1.0 - 2.0 * n->sigma2 * t;
    if (!(d > 0.0)) throw DomainError("E[exp(tY^2)] diverges for t >= 1/(2 sigma2)");
    return -0.5 * std::log(d) + n->m * n->m * t / d;
  }
  return square_cgf_numeric(dist, t);
}

double square_cgf(const CenteredVariable& x, double t) {
  if (t == 0.0) return 0.0;
  if (const auto* n = std::get_if<law::Normal>(&x.base().law())) {
    const double d = 1.0 - 2.0 * x.scale() * x.scale() * n->sigma2 * t;
    if (!(d > 0.0)) throw DomainError("E[exp(tX^2)] diverges for t >= 1/(2 Var X)");
    return -0.5 * std::log(d);
  }
  const Support s = x.base().support();
  if (t > 0.0 && !(std::isfinite(s.lower) && std::isfinite(s.upper))) {
    throw DomainError("E[exp(tX^2)] diverges for t > 0 on an unbounded support");
  }
  if (x.kind() == LawKind::discrete && std::isfinite(s.upper)) {
    // log-sum-exp over the atoms; large t would overflow exp(t z^2).
    const auto atoms = x.atoms();
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& [z, w] : atoms) {
      if (w > 0.0) top = std::max(top, t * z * z);
    }
    double total = 0.0;
    for (const auto& [z, w] : atoms) total += w * std::exp(t * z * z - top);
    return top + std::log(total);
  }
  const double v = x.expect([t](double z) { return std::exp(t * z * z); });
  return std::log(v);
}

std::vector<double> sample(const Distribution& dist, const Substream& stream,
                           std::size_t count) {
  if (count == 0) throw std::invalid_argument("sample count must be at least 1");
  Rng rng = stream.engine();
  std::vector<double> out(count);
  for (auto& v : out) v = dist.draw(rng);
  return out;
}

}  // namespace selfnorm
