#include "selfnorm/applications.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "selfnorm/numeric.hpp"

namespace selfnorm::applications {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void positive_x(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("x must be positive");
}

void nonnegative_x(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("x must be nonnegative");
}

void positive_n(std::size_t n) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
}

double as_double(std::size_t n) { return static_cast<double>(n); }

ApplicationBound trivial_two(ParamList params, Method method, const char* note) {
  ApplicationBound b;
  b.value = 2.0;
  b.params = std::move(params);
  b.method = method;
  b.notes.emplace_back(note);
  return b;
}

void append(std::vector<std::string>& to, const std::vector<std::string>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::closed_form: return "closed-form";
    case Method::optimized: return "optimized";
    case Method::cross_check: return "cross-check";
  }
  return "unknown";
}

double ApplicationBound::component(std::string_view name) const {
  for (const auto& [key, v] : components) {
    if (key == name) return v;
  }
  throw std::out_of_range("no component named " + std::string(name));
}

double cgf_reach(const std::function<double(double)>& f, double direction) {
  auto finite = [&](double t) {
    try {
      return std::isfinite(f(direction * t));
    } catch (const DomainError&) {
      return false;
    }
  };
  double good = 0.0;
  double bad = kInf;
  double t = 1.0;
  if (finite(t)) {
    good = t;
    for (int k = 0; k < 50; ++k) {
      t *= 2.0;
      if (!finite(t)) {
        bad = t;
        break;
      }
      good = t;
    }
  } else {
    bad = t;
    for (int k = 0; k < 50; ++k) {
      t *= 0.5;
      if (finite(t)) {
        good = t;
        break;
      }
      bad = t;
    }
  }
  if (good == 0.0) throw DomainError("cgf is not finite on any interval around 0");
  if (std::isfinite(bad)) {
    for (int k = 0; k < 60; ++k) {
      const double mid = 0.5 * (good + bad);
      (finite(mid) ? good : bad) = mid;
    }
  }
  return good;
}

double square_sup(const CenteredVariable& x) {
  const Support s = x.base().support();
  if (!std::isfinite(s.lower) || !std::isfinite(s.upper)) return kInf;
  const double lo = x.scale() * (s.lower - x.shift());
  const double hi = x.scale() * (s.upper - x.shift());
  return std::max(lo * lo, hi * hi);
}

bounds::MgfHandle square_mgf(const Distribution& regressor) {
  const bool closed = std::holds_alternative<law::Normal>(regressor.law());
  return {[regressor](double s) { return square_cgf(regressor, s); }, Interval::real_line(),
          closed ? bounds::MgfFlavor::exact : bounds::MgfFlavor::numeric};
}

RateTransform noise_square_rate(const CenteredVariable& noise) {
  const double sup = square_sup(noise);
  auto cgf = [noise](double t) { return square_cgf(noise, t); };
  const double c = cgf_reach(cgf, 1.0);
  const double second = noise.variance();
  return [=](double u) {
    if (!(u >= 0.0)) throw std::invalid_argument("rate argument must be nonnegative");
    if (u > sup) return transforms::TransformResult::infinity();
    // L'(0) = E[eps^2] >= u puts the supremum at t = 0.
    if (u <= second) return transforms::TransformResult{0.0, 0.0, 0.0, true, false};
    return transforms::fenchel_legendre(cgf, u, 0.0, c);
  };
}

ApplicationBound regression_bound(double x, double y, std::size_t n,
                                  const bounds::MgfHandle& regressor_square,
                                  const RateTransform& noise_rate, double sigma2) {
  nonnegative_x(x);
  positive_n(n);
  if (!(y > 0.0)) throw std::invalid_argument("y must be positive");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
  const double nn = as_double(n);
  // <M>_n = sigma2 sum phi^2, so log E[exp(s <M>_n)] = n H(sigma2 s).
  bounds::MgfHandle qv{[&regressor_square, nn, sigma2](double s) {
                         return nn * regressor_square.log_value(sigma2 * s);
                       },
                       Interval::real_line(), regressor_square.flavor};
  const auto first = bounds::variation_ratio_bound(x / sigma2, y, 0.0, 1.0, qv);
  const auto rate = noise_rate(sigma2 * y / nn);
  const double second = rate.infinite ? 0.0 : std::exp(-nn * rate.value);

  ApplicationBound b;
  b.value = first.raw + second;
  b.components = {{"term1", first.raw}, {"term2", second}, {"rate", rate.value}};
  if (first.argmin_p) b.components.emplace_back("argmin_p", *first.argmin_p);
  b.params = {{"x", x}, {"y", y}, {"n", nn}, {"sigma2", sigma2}};
  b.method = Method::optimized;
  append(b.notes, first.notes);
  if (rate.infinite) b.notes.emplace_back("rate is infinite: term2 vanishes");
  return b;
}

ApplicationBound regression_bernoulli_gaussian_bound(double x, std::size_t n, double p,
                                                     double tau2) {
  nonnegative_x(x);
  positive_n(n);
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0, 1)");
  if (!(tau2 > 0.0)) throw std::invalid_argument("tau2 must be positive");
  const double nn = as_double(n);
  const double r = std::max(p, 1.0 - p);
  const double closed = 2.0 * std::exp(-(nn / 4.0) * std::log1p(tau2 * x * x / (2.0 * r * r)));
  const auto regressor = make_distribution("normal", {{"m", 0.0}, {"sigma2", tau2}});
  const double generic = 2.0 * std::exp((nn / 2.0) * square_cgf(regressor, -x * x / (4.0 * r * r)));
  ApplicationBound b;
  b.value = closed;
  b.components = {{"closed_form", closed}, {"generic", generic}, {"r", r}};
  b.params = {{"x", x}, {"n", nn}, {"p", p}, {"tau2", tau2}};
  b.method = Method::closed_form;
  return b;
}

ApplicationBound ar1_bound_ls(double x, std::size_t n) {
  positive_x(x);
  positive_n(n);
  const auto yx = transforms::solve_yx(x);
  const double nn = as_double(n);
  ApplicationBound b;
  b.value = 2.0 * std::exp(-nn * x * x / (2.0 * (1.0 + yx.value)));
  b.components = {{"y_x", yx.value}, {"residual", yx.residual}};
  b.params = {{"x", x}, {"n", nn}};
  b.method = Method::closed_form;
  return b;
}

ApplicationBound ar1_bound_simple(double x, std::size_t n) {
  if (!(x > 0.0 && x < 0.5)) throw std::invalid_argument("x must lie in (0, 1/2)");
  positive_n(n);
  const double nn = as_double(n);
  ApplicationBound b;
  b.value = 2.0 * std::exp(-nn * x * x / (2.0 * (1.0 + 2.0 * x)));
  b.params = {{"x", x}, {"n", nn}};
  b.method = Method::closed_form;
  return b;
}

ApplicationBound ar1_bound_yw(double x, std::size_t n, double theta, bounds::Sided sided) {
  auto b = ar1_bound_ls(x, n);
  b.params.emplace("theta", theta);
  if (sided == bounds::Sided::one) {
    if (!(theta > 0.0)) throw std::invalid_argument("the one-sided form needs theta > 0");
    b.value /= 2.0;
    b.components.emplace_back("threshold", x);
    b.notes.emplace_back("event: theta-tilde - theta >= x");
  } else {
    b.components.emplace_back("threshold", x + std::abs(theta));
    b.notes.emplace_back("event: |theta-tilde - theta| >= x + |theta|");
  }
  return b;
}

double ar1_qv_mgf_bound(double t, std::size_t n, double sigma2) {
  positive_n(n);
  if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
  const double d = 1.0 - 2.0 * sigma2 * sigma2 * t;
  if (!(d > 0.0)) throw DomainError("t must be below 1/(2 sigma2^2)");
  return std::exp(-0.5 * as_double(n) * std::log(d));
}

bounds::MgfHandle ar1_qv_mgf_handle(std::size_t n, double sigma2) {
  positive_n(n);
  if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
  const double nn = as_double(n);
  return {[nn, sigma2](double s) { return -0.5 * nn * std::log1p(-2.0 * sigma2 * sigma2 * s); },
          Interval{-kInf, 0.0, true, false}, bounds::MgfFlavor::upper_bound};
}

ApplicationBound ar1_bound_via_mgf(double x, std::size_t n) {
  positive_x(x);
  positive_n(n);
  const double nn = as_double(n);
  const double x2 = x * x;
  const auto yx = transforms::solve_yx(x);
  auto neg_ell = [x](double y) { return -transforms::ar1_ell(y, x); };
  const auto e = numeric::golden_section_min(neg_ell, 0.5 * yx.value, 2.0 * yx.value, 1e-10);
  const double direct = 2.0 * std::exp(0.5 * nn * x2 * e.value);

  // The same infimum reached through the Hoelder bound for Gaussian
  // martingales, with sigma2 = 1 (the bound does not depend on sigma2).
  const auto holder = bounds::subgaussian_self_normalized(x, 0.0, 1.0, 1.0,
                                                          ar1_qv_mgf_handle(n, 1.0));
  ApplicationBound b;
  b.value = direct;
  b.components = {{"argmax_y", e.arg}, {"y_x", yx.value}, {"holder_route", 2.0 * holder.raw}};
  if (holder.argmin_p) b.components.emplace_back("argmin_p", *holder.argmin_p);
  b.params = {{"x", x}, {"n", nn}};
  b.method = Method::cross_check;
  append(b.notes, holder.notes);
  return b;
}

OffspringRate offspring_rate(const Distribution& offspring, double x) {
  nonnegative_x(x);
  const auto centred = centered(offspring);
  auto cgf = [&centred](double t) { return centred.cgf(t); };
  OffspringRate r;
  r.c = std::min(cgf_reach(cgf, 1.0), cgf_reach(cgf, -1.0));
  r.upper = transforms::fenchel_legendre(cgf, x, -r.c, r.c);
  r.lower = transforms::fenchel_legendre(cgf, -x, -r.c, r.c);
  // L >= 0 for a centered law, so J(0) = 0 exactly.
  r.j = x == 0.0 ? 0.0 : std::max(0.0, std::min(r.upper.value, r.lower.value));
  return r;
}

RateHandle offspring_j(const Distribution& offspring) {
  return [offspring](double x) { return offspring_rate(offspring, x).j; };
}

bounds::MgfHandle population_mgf(const Distribution& offspring, std::size_t generation) {
  // log E[exp(u X_k)] = L_Y(log E[exp(u X_{k-1})]) with L_Y the offspring cgf.
  return {[offspring, generation](double u) {
            double v = u;
            for (std::size_t k = 0; k < generation; ++k) v = offspring.cgf(v);
            return v;
          },
          Interval{-kInf, 0.0, true, false}, bounds::MgfFlavor::exact};
}

bounds::MgfHandle total_population_mgf(const Distribution& offspring, std::size_t generation) {
  // S_k = 1 + sum over the first generation of independent copies of S_{k-1}.
  return {[offspring, generation](double u) {
            double v = u;
            for (std::size_t k = 0; k < generation; ++k) v = u + offspring.cgf(v);
            return v;
          },
          Interval{-kInf, 0.0, true, false}, bounds::MgfFlavor::exact};
}

bounds::MgfHandle geometric_population_bound_mgf(double p, std::size_t generation) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0, 1)");
  const double k = as_double(generation);
  return {[p, k](double u) { return k * std::log(p) + u - std::log(-std::expm1(u)); },
          Interval{-kInf, 0.0, true, true}, bounds::MgfFlavor::upper_bound};
}

ApplicationBound lotka_nagaev_bound(double x, std::size_t n, const RateHandle& rate,
                                    const bounds::MgfHandle& pop_mgf) {
  nonnegative_x(x);
  positive_n(n);
  const double j = rate(x);
  ParamList params{{"x", x}, {"n", as_double(n)}, {"J", j}};
  if (!(j > 0.0)) return trivial_two(std::move(params), Method::optimized, "J(x) = 0: trivial bound");
  const double plain = 2.0 * pop_mgf.value(-j);
  // (E[exp(-(p-1) J Z)])^{1/p} with a = 0 and b^2 / 2 = 1.
  const auto holder = bounds::holder_bound(2.0, j, 0.0, std::sqrt(2.0), pop_mgf);
  ApplicationBound b;
  b.value = holder.raw;
  b.components = {{"plain", plain}, {"optimized", holder.raw}, {"J", j}};
  if (holder.argmin_p) b.components.emplace_back("argmin_p", *holder.argmin_p);
  b.params = std::move(params);
  b.method = Method::optimized;
  append(b.notes, holder.notes);
  return b;
}

ApplicationBound harris_bound(double x, std::size_t n, const RateHandle& rate,
                              const bounds::MgfHandle& total_mgf) {
  nonnegative_x(x);
  positive_n(n);
  const double j = rate(x);
  ParamList params{{"x", x}, {"n", as_double(n)}, {"J", j}};
  if (!(j > 0.0)) return trivial_two(std::move(params), Method::optimized, "J(x) = 0: trivial bound");
  const auto holder = bounds::holder_bound(2.0, j, 0.0, std::sqrt(2.0), total_mgf);
  ApplicationBound b;
  b.value = holder.raw;
  b.components = {{"optimized", holder.raw}, {"J", j}};
  if (holder.argmin_p) b.components.emplace_back("argmin_p", *holder.argmin_p);
  b.params = std::move(params);
  b.method = Method::optimized;
  append(b.notes, holder.notes);
  return b;
}

ApplicationBound geometric_branching_bound(double x, std::size_t n, double p) {
  positive_x(x);
  positive_n(n);
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0, 1)");
  const auto offspring = make_distribution("geometric", {{"p", p}});
  const double j = offspring_rate(offspring, x).j;
  if (!(j > 0.0)) throw std::invalid_argument("J(x) vanishes");
  const double nn = as_double(n);
  ApplicationBound b;
  b.value = 2.0 * std::pow(p, nn) * std::exp(-j) / (p * -std::expm1(-j));
  b.components = {{"J", j}};
  b.params = {{"x", x}, {"n", nn}, {"p", p}};
  b.method = Method::closed_form;
  b.notes.emplace_back("mgf: upper bound (result stays a valid bound)");
  return b;
}

}  // namespace selfnorm::applications
