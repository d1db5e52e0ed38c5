#include <cmath>
#include <numeric>

#include "doctest.h"
#include "oracle.hpp"
#include "selfnorm/heaviness.hpp"
#include "selfnorm/processes.hpp"

using namespace selfnorm;
using namespace selfnorm::processes;

namespace {

Distribution make(std::string_view name, const ParamList& params) {
  return make_distribution(name, params);
}

RegressionModel gaussian_regression(double theta, const CenteredVariable& noise) {
  return {theta, make("normal", {{"m", 0.0}, {"sigma2", 1.0}}), noise};
}

void check_path_shape(const MartingalePath& p, std::size_t n) {
  REQUIRE(p.horizon() == n);
  REQUIRE(p.m.size() == n + 1);
  CHECK(p.m[0] == 0.0);
  CHECK(p.tv[0] == 0.0);
  CHECK(p.pv[0] == 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    CHECK(p.tv[k] >= p.tv[k - 1]);
    CHECK(p.pv[k] >= p.pv[k - 1]);
    CHECK(p.m[k] - p.m[k - 1] == doctest::Approx(p.increments[k - 1]));
  }
}

}  // namespace

TEST_CASE("regression with zero noise recovers theta exactly") {
  auto model = gaussian_regression(0.7, centered(make("constant", {{"value", 0.0}})));
  auto path = simulate_regression(model, 20, Substream{1, 0});
  REQUIRE(path.estimates.least_squares.has_value());
  CHECK(*path.estimates.least_squares == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(path.terminal_m() == 0.0);
  CHECK(path.off_assumption);
}

TEST_CASE("regression least-squares identity on every path") {
  const auto noise = centered(make("exponential", {{"lambda", 2.0}}));
  auto model = gaussian_regression(-0.4, noise);
  const double s2 = model.noise_variance();
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto p = simulate_regression(model, 30, Substream{11, i});
    check_path_shape(p, 30);
    REQUIRE(p.estimates.least_squares.has_value());
    const double lhs = *p.estimates.least_squares - model.theta;
    const double rhs = s2 * p.terminal_m() / p.terminal_pv();
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("Bernoulli noise: total variation is dominated by the predictable one") {
  for (double p : {0.2, 0.5, 0.8}) {
    auto model = gaussian_regression(0.3, centered(make("bernoulli", {{"p", p}})));
    const double q = 1.0 - p;
    const double r = std::max(p, q);
    for (std::uint64_t i = 0; i < 50; ++i) {
      auto path = simulate_regression(model, 40, Substream{5, i});
      CHECK(path.terminal_tv() <= (r * r / (p * q)) * path.terminal_pv() * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("coupled regression pairs") {
  auto model = gaussian_regression(0.5, centered(make("normal", {{"m", 0.0}, {"sigma2", 1.0}})));
  model.coupling = 0.8;
  auto p = simulate_regression(model, 10, Substream{3, 4});
  for (std::size_t k = 1; k <= 10; ++k) {
    CHECK(p.increments[k - 1] == doctest::Approx(p.state[k - 1] * p.noise[k]));
  }
}

TEST_CASE("AR(1) identities, f_n and Yule-Walker range") {
  AR1Model model{0.8, 1.3, 2.0};
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto p = simulate_ar1(model, 50, Substream{21, i});
    check_path_shape(p, 50);
    const auto& e = p.estimates;
    REQUIRE(e.least_squares.has_value());
    REQUIRE(e.yule_walker.has_value());
    REQUIRE(e.yw_correction.has_value());
    const double ls = *e.least_squares - model.theta;
    CHECK(std::abs(ls - model.sigma2 * p.terminal_m() / p.terminal_pv()) <=
          1e-12 * std::max(1.0, std::abs(ls)));
    double full = 0.0;
    for (double x : p.state) full += x * x;
    const double f = *e.yw_correction;
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    CHECK(f == doctest::Approx(p.state.back() * p.state.back() / full).epsilon(1e-12));
    const double yw = *e.yule_walker - model.theta + model.theta * f;
    CHECK(std::abs(yw - p.terminal_m() / full) <= 1e-12 * std::max(1.0, std::abs(yw)));
    CHECK(std::abs(*e.yule_walker) <= 1.0);
  }
}

TEST_CASE("AR(1) model validation") {
  CHECK_THROWS_AS(simulate_ar1(AR1Model{0.5, 1.0, 0.5}, 10, Substream{}), std::invalid_argument);
  CHECK_THROWS_AS(simulate_ar1(AR1Model{0.5, 1.0, 1.0}, 0, Substream{}), std::invalid_argument);
  AR1Model zero{0.5, 1.0, 0.5, true};
  auto p = simulate_ar1(zero, 5, Substream{});
  CHECK(p.state[0] == 0.0);
  CHECK(p.off_assumption);
}

TEST_CASE("simulation is deterministic per substream") {
  AR1Model model{1.1};
  auto a = simulate_ar1(model, 40, Substream{42, 7});
  auto b = simulate_ar1(model, 40, Substream{42, 7});
  auto c = simulate_ar1(model, 40, Substream{42, 8});
  CHECK(a.m == b.m);
  CHECK(a.state == b.state);
  CHECK(a.m != c.m);
  BranchingModel gw{make("geometric", {{"p", 0.5}})};
  CHECK(simulate_galton_watson(gw, 8, Substream{1, 2}).state ==
        simulate_galton_watson(gw, 8, Substream{1, 2}).state);
}

TEST_CASE("Galton-Watson with deterministic offspring") {
  BranchingModel gw{make("constant", {{"value", 2.0}})};
  auto p = simulate_galton_watson(gw, 10, Substream{9, 0});
  CHECK(p.state.back() == 1024.0);
  CHECK(*p.estimates.lotka_nagaev == 2.0);
  CHECK(*p.estimates.harris == 2.0);
  CHECK(p.terminal_m() == 0.0);
  CHECK_FALSE(p.extinct);
}

TEST_CASE("Galton-Watson identities and extinction") {
  BranchingModel geo{make("geometric", {{"p", 0.5}})};
  const double mu = geo.mean();
  CHECK(mu == doctest::Approx(2.0));
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto p = simulate_galton_watson(geo, 8, Substream{4, i});
    CHECK_FALSE(p.extinct);
    check_path_shape(p, 8);
    const double s = std::accumulate(p.state.begin(), p.state.end() - 1, 0.0);
    const double harris = *p.estimates.harris - mu;
    CHECK(std::abs(harris - p.terminal_m() / s) <= 1e-12 * std::max(1.0, std::abs(harris)));
    CHECK(p.terminal_pv() == doctest::Approx(geo.variance() * s));
  }

  BranchingModel poisson{make("poisson", {{"lambda", 1.2}})};
  int extinct = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto p = simulate_galton_watson(poisson, 10, Substream{8, i});
    if (p.extinct) {
      ++extinct;
      CHECK(p.off_assumption);
      CHECK_FALSE(p.estimates.harris.has_value());
    }
    if (p.state[9] == 0.0) CHECK_FALSE(p.estimates.lotka_nagaev.has_value());
  }
  CHECK(extinct > 0);
  CHECK_THROWS_AS(simulate_galton_watson(BranchingModel{make("bernoulli", {{"p", 0.5}})}, 5,
                                         Substream{}),
                  std::invalid_argument);
}

TEST_CASE("Galton-Watson exponential identity has mean one") {
  // Short horizon and small t keep the variance of the weight finite.
  BranchingModel geo{make("geometric", {{"p", 0.5}})};
  const auto xi = centered(geo.offspring);
  const std::size_t n = 4;
  const int trials = 100000;
  for (double t : {0.05, 0.1}) {
    const double lt = xi.cgf(t);
    double sum = 0.0;
    double sq = 0.0;
    for (int i = 0; i < trials; ++i) {
      auto p = simulate_galton_watson(geo, n, Substream{77, static_cast<std::uint64_t>(i)});
      const double s = std::accumulate(p.state.begin(), p.state.end() - 1, 0.0);
      const double w = std::exp(t * p.terminal_m() - lt * s);
      sum += w;
      sq += w * w;
    }
    const double mean = sum / trials;
    const double se = std::sqrt((sq / trials - mean * mean) / trials);
    CAPTURE(t);
    CHECK(std::abs(mean - 1.0) <= 5.0 * se);
  }
}

TEST_CASE("exponential processes") {
  AR1Model model{0.5};
  auto p = simulate_ar1(model, 25, Substream{2, 3});
  for (double v : v_process(p, 0.0)) CHECK(v == 1.0);
  for (double v : w_process(p, 0.0)) CHECK(v == 1.0);
  const double t = 0.7;
  auto v = v_process(p, t);
  auto w = w_process(p, t);
  CHECK(v[0] == 1.0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    CHECK(std::log(v[k]) ==
          doctest::Approx(t * p.m[k] - t * t * (p.tv[k] + p.pv[k]) / 2.0).epsilon(1e-12));
    CHECK(std::log(w[k]) == doctest::Approx(t * p.m[k] - t * t * p.tv[k] / 2.0).epsilon(1e-12));
  }
  CHECK(v_terminal(p, t) == doctest::Approx(v.back()).epsilon(1e-14));
  CHECK(w_terminal(p, t) == doctest::Approx(w.back()).epsilon(1e-14));
}

TEST_CASE("Monte Carlo means of V and W stay below one") {
  const int trials = 50000;
  auto mean_se = [&](auto&& sim, auto&& weight) {
    double sum = 0.0;
    double sq = 0.0;
    for (int i = 0; i < trials; ++i) {
      const double w = weight(sim(static_cast<std::uint64_t>(i)));
      sum += w;
      sq += w * w;
    }
    const double m = sum / trials;
    return std::pair{m, std::sqrt((sq / trials - m * m) / trials)};
  };
  AR1Model ar{0.9};
  for (double t : {0.1, 0.5, 1.0}) {
    auto [m, se] = mean_se([&](std::uint64_t i) { return simulate_ar1(ar, 30, Substream{6, i}); },
                           [t](const MartingalePath& p) { return v_terminal(p, t); });
    CHECK(m <= 1.0 + 3.0 * se);
  }
  // heavy-left increments: nonnegative regressor times centered exponential noise
  RegressionModel heavy{0.2, make("constant", {{"value", 1.0}}),
                        centered(make("exponential", {{"lambda", 1.0}}))};
  for (double t : {0.1, 0.5}) {
    auto [m, se] =
        mean_se([&](std::uint64_t i) { return simulate_regression(heavy, 30, Substream{7, i}); },
                [t](const MartingalePath& p) { return w_terminal(p, t); });
    CHECK(m <= 1.0 + 3.0 * se);
  }
}

TEST_CASE("heavy-left noise stays heavy-left after positive scaling") {
  const auto noise = centered(make("exponential", {{"lambda", 1.0}}));
  for (double phi : {0.5, 1.0, 2.0}) {
    auto report = heaviness::classify(noise.scaled(phi));
    CAPTURE(phi);
    CHECK(report.classification == heaviness::Classification::heavy_left);
  }
}
