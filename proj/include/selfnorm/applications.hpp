#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "selfnorm/bounds.hpp"
#include "selfnorm/distributions.hpp"
#include "selfnorm/transforms.hpp"

namespace selfnorm::applications {

enum class Method { closed_form, optimized, cross_check };
std::string_view to_string(Method m) noexcept;

/// Tail bound for an estimator, with its named pieces and the inputs that
/// produced it.
struct ApplicationBound {
  double value = 0.0;
  std::vector<std::pair<std::string, double>> components;
  ParamList params;
  Method method = Method::closed_form;
  std::vector<std::string> notes;

  /// Throws std::out_of_range for an unknown name.
  [[nodiscard]] double component(std::string_view name) const;
};

/// u -> sup_{0 <= t <= c} { u t - L(t) } for the squared noise.
using RateTransform = std::function<transforms::TransformResult(double)>;
/// x -> J(x).
using RateHandle = std::function<double(double)>;

/// Largest probe t = 2^k (k < 50, halving below 1 when needed) along the
/// given direction at which f stays finite, refined by bisection.
double cgf_reach(const std::function<double(double)>& f, double direction);

/// ess sup of X^2, +inf for unbounded laws.
double square_sup(const CenteredVariable& x);

/// log E[exp(s phi^2)] as a handle.
bounds::MgfHandle square_mgf(const Distribution& regressor);
/// I(u) for L(t) = log E[exp(t eps^2)] on [0, c]. For bounded noise the
/// transform is taken over the whole half-line, so it is +inf above ess sup eps^2.
RateTransform noise_square_rate(const CenteredVariable& noise);

/// 2 inf_p exp((n/p) H(-(p-1) x^2 / (2 sigma2 (1 + y)))) + exp(-n I(sigma2 y / n)).
ApplicationBound regression_bound(double x, double y, std::size_t n,
                                  const bounds::MgfHandle& regressor_square,
                                  const RateTransform& noise_rate, double sigma2);

/// Centered Bernoulli(p) noise, N(0, tau2) regressors.
ApplicationBound regression_bernoulli_gaussian_bound(double x, std::size_t n, double p,
                                                     double tau2);

/// 2 exp(-n x^2 / (2 (1 + y_x))).
ApplicationBound ar1_bound_ls(double x, std::size_t n);
/// 2 exp(-n x^2 / (2 (1 + 2x))), 0 < x < 1/2.
ApplicationBound ar1_bound_simple(double x, std::size_t n);
/// Bound on P(|theta-tilde - theta| >= x + |theta|); with Sided::one and
/// theta > 0, bound on P(theta-tilde - theta >= x). The event threshold is
/// reported as the "threshold" component.
ApplicationBound ar1_bound_yw(double x, std::size_t n, double theta,
                              bounds::Sided sided = bounds::Sided::two);
/// 2 inf_y exp(-(n x^2 / 2) l(y)), searched numerically, plus the same bound
/// through the Hoelder route with the quadratic-variation mgf bound.
ApplicationBound ar1_bound_via_mgf(double x, std::size_t n);

/// (1 - 2 sigma2^2 t)^{-n/2}; t < 1/(2 sigma2^2).
double ar1_qv_mgf_bound(double t, std::size_t n, double sigma2);
bounds::MgfHandle ar1_qv_mgf_handle(std::size_t n, double sigma2);

/// I(x), I(-x) and J(x) = min of the two for the centered offspring law,
/// over [-c, c] with c from cgf_reach.
struct OffspringRate {
  double c = 0.0;
  transforms::TransformResult upper;  // I(x)
  transforms::TransformResult lower;  // I(-x)
  double j = 0.0;
};
OffspringRate offspring_rate(const Distribution& offspring, double x);
RateHandle offspring_j(const Distribution& offspring);

/// log E[exp(u X_k)] by iterating the offspring cgf k times (X_0 = 1).
bounds::MgfHandle population_mgf(const Distribution& offspring, std::size_t generation);
/// log E[exp(u S_k)], S_k = X_0 + ... + X_k.
bounds::MgfHandle total_population_mgf(const Distribution& offspring, std::size_t generation);
/// Upper bound E[s^{X_k}] <= p^k s / (1 - s) for geometric offspring on {1, 2, ...}.
bounds::MgfHandle geometric_population_bound_mgf(double p, std::size_t generation);

/// Plain form 2 E[exp(-J X_{n-1})] and Hoelder form
/// 2 inf_p (E[exp(-(p-1) J X_{n-1})])^{1/p}; pop_mgf describes X_{n-1}.
ApplicationBound lotka_nagaev_bound(double x, std::size_t n, const RateHandle& rate,
                                    const bounds::MgfHandle& pop_mgf);
/// 2 inf_p (E[exp(-(p-1) J S_{n-1})])^{1/p}; total_mgf describes S_{n-1}.
ApplicationBound harris_bound(double x, std::size_t n, const RateHandle& rate,
                              const bounds::MgfHandle& total_mgf);
/// 2 p^n e^{-J} / (p (1 - e^{-J})) for geometric offspring on {1, 2, ...}.
ApplicationBound geometric_branching_bound(double x, std::size_t n, double p);

}  // namespace selfnorm::applications
