#include "selfnorm/processes.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace selfnorm::processes {
namespace {

void check_horizon(std::size_t n) {
  if (n < 1) throw std::invalid_argument("horizon n must be at least 1");
}

MartingalePath empty_path(std::size_t n) {
  MartingalePath p;
  p.increments.reserve(n);
  p.m.reserve(n + 1);
  p.tv.reserve(n + 1);
  p.pv.reserve(n + 1);
  p.state.reserve(n + 1);
  p.noise.reserve(n + 1);
  p.m.push_back(0.0);
  p.tv.push_back(0.0);
  p.pv.push_back(0.0);
  return p;
}

void push_increment(MartingalePath& p, double dm, double dpv) {
  p.increments.push_back(dm);
  p.m.push_back(p.m.back() + dm);
  p.tv.push_back(p.tv.back() + dm * dm);
  p.pv.push_back(p.pv.back() + dpv);
}

}  // namespace

void validate(const RegressionModel& model) {
  if (!std::isfinite(model.theta)) throw std::invalid_argument("theta must be finite");
  const double s2 = model.noise_variance();
  if (!std::isfinite(s2)) throw std::invalid_argument("noise variance must be finite");
  if (!std::isfinite(model.regressor.variance())) {
    throw std::invalid_argument("regressor must have a finite variance");
  }
  if (!std::isfinite(model.coupling)) throw std::invalid_argument("coupling must be finite");
}

void validate(const AR1Model& model) {
  if (!std::isfinite(model.theta)) throw std::invalid_argument("theta must be finite");
  if (!(model.sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
  if (!model.zero_start && !(model.tau2 >= model.sigma2)) {
    throw std::invalid_argument("tau2 must be at least sigma2");
  }
}

void validate(const BranchingModel& model) {
  const auto s = model.offspring.support();
  if (!s.lattice || s.lower < 0.0) {
    throw std::invalid_argument("offspring law must live on the nonnegative integers");
  }
  if (!(model.mean() > 1.0) || !std::isfinite(model.mean())) {
    throw std::invalid_argument("offspring mean must be finite and greater than 1");
  }
  if (!std::isfinite(model.variance())) {
    throw std::invalid_argument("offspring variance must be finite");
  }
}

MartingalePath simulate_regression(const RegressionModel& model, std::size_t n, Rng& rng) {
  check_horizon(n);
  validate(model);
  const double s2 = model.noise_variance();
  auto path = empty_path(n);
  path.off_assumption = !(s2 > 0.0);

  const bool coupled = model.coupling != 0.0;
  double eps_prev = coupled ? model.noise.draw(rng) : 0.0;
  double phi = model.regressor.draw(rng) + model.coupling * eps_prev;
  path.state.push_back(phi);
  path.noise.push_back(eps_prev);

  double cross = 0.0;   // sum phi_{k-1} X_k
  double square = 0.0;  // sum phi_{k-1}^2
  for (std::size_t k = 1; k <= n; ++k) {
    const double eps = model.noise.draw(rng);
    const double x = model.theta * phi + eps;
    cross += phi * x;
    square += phi * phi;
    push_increment(path, phi * eps, s2 * phi * phi);
    path.noise.push_back(eps);
    phi = model.regressor.draw(rng) + model.coupling * eps;
    path.state.push_back(phi);
  }
  if (square > 0.0) path.estimates.least_squares = cross / square;
  return path;
}

MartingalePath simulate_regression(const RegressionModel& model, std::size_t n,
                                   const Substream& seed) {
  auto rng = seed.engine();
  return simulate_regression(model, n, rng);
}

MartingalePath simulate_ar1(const AR1Model& model, std::size_t n, Rng& rng) {
  check_horizon(n);
  validate(model);
  auto path = empty_path(n);
  path.off_assumption = model.zero_start;
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double sd = std::sqrt(model.sigma2);

  double x = model.zero_start ? 0.0 : std::sqrt(model.tau2) * gauss(rng);
  path.state.push_back(x);
  path.noise.push_back(0.0);
  double cross = 0.0;   // sum X_{k-1} X_k
  double lagged = 0.0;  // sum_{k=1}^n X_{k-1}^2
  for (std::size_t k = 1; k <= n; ++k) {
    const double eps = sd * gauss(rng);
    const double next = model.theta * x + eps;
    cross += x * next;
    lagged += x * x;
    push_increment(path, x * eps, model.sigma2 * x * x);
    path.noise.push_back(eps);
    path.state.push_back(next);
    x = next;
  }
  const double full = lagged + x * x;  // sum_{k=0}^n X_k^2
  if (lagged > 0.0) path.estimates.least_squares = cross / lagged;
  if (full > 0.0) {
    path.estimates.yule_walker = cross / full;
    path.estimates.yw_correction = x * x / full;
  }
  return path;
}

MartingalePath simulate_ar1(const AR1Model& model, std::size_t n, const Substream& seed) {
  auto rng = seed.engine();
  return simulate_ar1(model, n, rng);
}

MartingalePath simulate_galton_watson(const BranchingModel& model, std::size_t n, Rng& rng) {
  check_horizon(n);
  validate(model);
  const double mu = model.mean();
  const double s2 = model.variance();
  auto path = empty_path(n);
  double x = 1.0;
  path.state.push_back(x);
  path.noise.push_back(0.0);
  double born = 0.0;    // sum_{k=1}^n X_k
  double parents = 0.0; // sum_{k=1}^n X_{k-1} = S_{n-1}
  for (std::size_t k = 1; k <= n; ++k) {
    const double next = model.offspring.draw_sum(static_cast<std::uint64_t>(x), rng);
    const double xi = next - mu * x;
    push_increment(path, xi, s2 * x);
    path.noise.push_back(xi);
    path.state.push_back(next);
    born += next;
    parents += x;
    if (x == 0.0) path.extinct = true;
    x = next;
  }
  const double before_last = path.state[n - 1];
  if (before_last > 0.0) {
    path.estimates.lotka_nagaev = x / before_last;
  }
  if (!path.extinct) path.estimates.harris = born / parents;
  path.off_assumption = path.extinct;
  return path;
}

MartingalePath simulate_galton_watson(const BranchingModel& model, std::size_t n,
                                      const Substream& seed) {
  auto rng = seed.engine();
  return simulate_galton_watson(model, n, rng);
}

double v_terminal(const MartingalePath& path, double t) {
  return std::exp(t * path.terminal_m() -
                  0.5 * t * t * (path.terminal_tv() + path.terminal_pv()));
}

double w_terminal(const MartingalePath& path, double t) {
  return std::exp(t * path.terminal_m() - 0.5 * t * t * path.terminal_tv());
}

std::vector<double> v_process(const MartingalePath& path, double t) {
  std::vector<double> out(path.m.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = std::exp(t * path.m[k] - 0.5 * t * t * (path.tv[k] + path.pv[k]));
  }
  return out;
}

std::vector<double> w_process(const MartingalePath& path, double t) {
  std::vector<double> out(path.m.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = std::exp(t * path.m[k] - 0.5 * t * t * path.tv[k]);
  }
  return out;
}

}  // namespace selfnorm::processes
