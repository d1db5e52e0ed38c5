#include <cmath>

#include "doctest.h"
#include "frozen.hpp"
#include "oracle.hpp"
#include "selfnorm/applications.hpp"
#include "selfnorm/processes.hpp"

using namespace selfnorm;
using namespace selfnorm::applications;

namespace {

Distribution make(std::string_view name, const ParamList& params) {
  return make_distribution(name, params);
}

bool has_note(const ApplicationBound& b, std::string_view text) {
  for (const auto& n : b.notes) {
    if (n.find(text) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("method tags") {
  CHECK(to_string(Method::closed_form) == "closed-form");
  CHECK(to_string(Method::optimized) == "optimized");
  CHECK(to_string(Method::cross_check) == "cross-check");
  ApplicationBound b;
  b.components = {{"a", 1.0}};
  CHECK(b.component("a") == 1.0);
  CHECK_THROWS_AS((void)b.component("b"), std::out_of_range);
}

TEST_CASE("cgf reach") {
  // log(1/(1 - t)) is finite for t < 1
  auto f = [](double t) {
    if (t >= 1.0) throw DomainError("outside");
    return -std::log1p(-t);
  };
  CHECK(cgf_reach(f, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cgf_reach(f, -1.0) >= std::ldexp(1.0, 49));
  auto g = [](double t) { return t < 0.3 ? t * t : std::numeric_limits<double>::infinity(); };
  CHECK(cgf_reach(g, 1.0) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("noise square rate") {
  const auto bern = centered(make("bernoulli", {{"p", 0.3}}));
  CHECK(square_sup(bern) == doctest::Approx(0.49));
  auto rate = noise_square_rate(bern);
  CHECK(rate(0.5).infinite);
  CHECK(rate(0.1).value == 0.0);
  CHECK(rate(0.1).boundary);
  // eps^2 takes 0.09 w.p. 0.7 and 0.49 w.p. 0.3; compare with a brute-force sup
  const double u = 0.3;
  double best = 0.0;
  for (double t = 0.0; t < 60.0; t += 1e-4) {
    best = std::max(best, u * t - std::log(0.7 * std::exp(0.09 * t) + 0.3 * std::exp(0.49 * t)));
  }
  CHECK(rate(u).value == doctest::Approx(best).epsilon(1e-7));

  const auto gauss = centered(make("normal", {{"m", 0.0}, {"sigma2", 1.0}}));
  CHECK(std::isinf(square_sup(gauss)));
  auto grate = noise_square_rate(gauss);
  // eps^2 ~ chi^2_1: L(t) = -log(1 - 2t)/2 on t < 1/2, sup at t = (1 - 1/u)/2
  const double v = 3.0;
  CHECK(grate(v).value == doctest::Approx(0.5 * (v - 1.0 - std::log(v))).epsilon(1e-8));
}

TEST_CASE("regression bound") {
  const auto reg = make("normal", {{"m", 0.0}, {"sigma2", 1.0}});
  const auto noise = centered(make("bernoulli", {{"p", 0.3}}));
  const double s2 = noise.variance();
  auto rate = noise_square_rate(noise);
  const std::size_t n = 50;

  auto tiny = regression_bound(1e-9, 1.0, n, square_mgf(reg), rate, s2);
  CHECK(tiny.component("term1") == doctest::Approx(2.0));

  // y above the a.s. bound of sum eps^2 / sigma2 makes term2 vanish exactly
  const double y = 0.49 * n / s2 * 1.001;
  auto big = regression_bound(1.0, y, n, square_mgf(reg), rate, s2);
  CHECK(big.component("term2") == 0.0);
  CHECK(has_note(big, "infinite"));

  for (double yy : {1.0, 5.0, 40.0}) {
    auto b = regression_bound(0.7, yy, n, square_mgf(reg), rate, s2);
    CHECK(b.value == b.component("term1") + b.component("term2"));
    CHECK(b.value > 0.0);
    CHECK(b.method == Method::optimized);
  }
  double prev = 1e300;
  for (double x = 0.1; x < 3.0; x += 0.2) {
    const double v = regression_bound(x, 5.0, n, square_mgf(reg), rate, s2).value;
    CHECK(v <= prev * (1.0 + 1e-9));
    prev = v;
  }
}

TEST_CASE("Bernoulli noise with Gaussian regressors") {
  CHECK(regression_bernoulli_gaussian_bound(0.0, 10, 0.3, 1.0).value == 2.0);
  CHECK(regression_bernoulli_gaussian_bound(1.0, 4, 0.5, 1.0).value ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  for (double p : {0.2, 0.5, 0.7}) {
    for (double tau2 : {0.5, 1.0, 3.0}) {
      for (double x : {0.1, 1.0, 2.5}) {
        auto b = regression_bernoulli_gaussian_bound(x, 20, p, tau2);
        CHECK(oracle::rel_diff(b.component("closed_form"), b.component("generic")) <= 1e-12);
        // generic form from a quadrature oracle for log E exp(s phi^2)
        const double r = std::max(p, 1.0 - p);
        const double s = -x * x / (4.0 * r * r);
        const double m = oracle::simpson(
            [&](double z) {
              return std::exp(s * tau2 * z * z) * std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
            },
            -12.0, 12.0, 40000);
        CHECK(oracle::rel_diff(b.value, 2.0 * std::pow(m, 10.0)) <= 1e-9);
      }
    }
  }
  CHECK_THROWS_AS(regression_bernoulli_gaussian_bound(1.0, 4, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("AR(1) least-squares bounds") {
  CHECK(ar1_bound_ls(1e-9, 100).value == doctest::Approx(2.0));
  const double x = std::sqrt(2.0 * std::log(2.0) - 1.0);
  CHECK(ar1_bound_ls(x, 30).value == doctest::Approx(2.0 * std::exp(-30.0 * x * x / 4.0)).epsilon(1e-12));

  std::size_t i = 0;
  for (double xx : {0.1, 0.3, 0.5, 1.0}) {
    for (std::size_t n : {10u, 100u}) {
      const auto ls = ar1_bound_ls(xx, n);
      CHECK(oracle::rel_diff(ls.value, oracle::kAr1LsGrid[i++]) <= 1e-12);
      const auto mgf = ar1_bound_via_mgf(xx, n);
      CHECK(oracle::rel_diff(ls.value, mgf.value) <= 1e-10);
      CHECK(std::abs(mgf.component("argmax_y") - ls.component("y_x")) <= 1e-6);
      CHECK(oracle::rel_diff(ls.value, mgf.component("holder_route")) <= 1e-6);
      CHECK(mgf.method == Method::cross_check);
    }
  }
  CHECK(ar1_bound_via_mgf(1e-6, 10).value == doctest::Approx(2.0));
}

TEST_CASE("AR(1) simple and Yule-Walker forms") {
  CHECK(ar1_bound_simple(0.25, 100).value ==
        doctest::Approx(2.0 * std::exp(-100.0 * 0.0625 / 3.0)).epsilon(1e-15));
  CHECK(ar1_bound_simple(1e-9, 10).value == doctest::Approx(2.0));
  for (double x = 0.01; x < 0.5; x += 0.01) {
    CHECK(ar1_bound_simple(x, 50).value >= ar1_bound_ls(x, 50).value);
  }
  CHECK_THROWS_AS(ar1_bound_simple(0.5, 10), std::invalid_argument);

  auto yw = ar1_bound_yw(0.3, 40, -0.5);
  CHECK(yw.value == ar1_bound_ls(0.3, 40).value);
  CHECK(yw.component("threshold") == doctest::Approx(0.8));
  auto one = ar1_bound_yw(0.3, 40, 0.5, bounds::Sided::one);
  CHECK(one.value == 0.5 * ar1_bound_yw(0.3, 40, 0.5).value);
  CHECK(one.component("threshold") == 0.3);
  CHECK_THROWS_AS(ar1_bound_yw(0.3, 40, -0.5, bounds::Sided::one), std::invalid_argument);
}

TEST_CASE("AR(1) bounds are nonincreasing in x and n") {
  double prev = 3.0;
  for (double x = 0.05; x < 2.0; x += 0.05) {
    const double v = ar1_bound_ls(x, 20).value;
    CHECK(v <= prev);
    prev = v;
  }
  prev = 3.0;
  for (std::size_t n = 1; n < 200; n += 7) {
    const double v = ar1_bound_ls(0.3, n).value;
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("quadratic variation mgf bound") {
  CHECK(ar1_qv_mgf_bound(0.0, 10, 1.0) == 1.0);
  CHECK(ar1_qv_mgf_bound(-0.5, 2, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(ar1_qv_mgf_bound(0.5, 2, 1.0), DomainError);
  auto h = ar1_qv_mgf_handle(7, 1.3);
  CHECK(h.flavor == bounds::MgfFlavor::upper_bound);
  CHECK(h.value(-0.2) == doctest::Approx(ar1_qv_mgf_bound(-0.2, 7, 1.3)).epsilon(1e-14));
  CHECK_THROWS_AS((void)h.value(0.1), DomainError);

  processes::AR1Model model{0.5};
  const int trials = 100000;
  for (double t : {-0.02, -0.2}) {
    double sum = 0.0;
    double sq = 0.0;
    for (int i = 0; i < trials; ++i) {
      auto p = processes::simulate_ar1(model, 20, Substream{31, static_cast<std::uint64_t>(i)});
      const double w = std::exp(t * p.terminal_pv());
      sum += w;
      sq += w * w;
    }
    const double mean = sum / trials;
    const double se = std::sqrt((sq / trials - mean * mean) / trials);
    CHECK(mean <= ar1_qv_mgf_bound(t, 20, 1.0) + 3.0 * se);
  }
}

TEST_CASE("offspring rate J") {
  const auto geo = make("geometric", {{"p", 0.5}});
  const double xs[] = {0.5, 1.0, 2.0};
  for (int i = 0; i < 3; ++i) {
    auto r = offspring_rate(geo, xs[i]);
    CHECK(r.c > 0.0);
    CHECK(oracle::rel_diff(r.j, oracle::kJGeom05[i]) <= 1e-9);
    CHECK(r.j == std::min(r.upper.value, r.lower.value));
  }
  CHECK(offspring_rate(geo, 0.0).j == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(offspring_j(geo)(1.0) == doctest::Approx(oracle::kJGeom05[1]).epsilon(1e-9));
}

TEST_CASE("population mgf handles") {
  const double p = 0.5;
  const auto geo = make("geometric", {{"p", p}});
  // X_k ~ Geom(p^k) on {1, 2, ...}
  for (std::size_t k : {1u, 3u, 6u}) {
    const double q = std::pow(p, static_cast<double>(k));
    for (double u : {-0.1, -1.0, -4.0}) {
      const double s = std::exp(u);
      CHECK(population_mgf(geo, k).value(u) ==
            doctest::Approx(q * s / (1.0 - (1.0 - q) * s)).epsilon(1e-12));
      CHECK(geometric_population_bound_mgf(p, k).value(u) >= population_mgf(geo, k).value(u));
    }
  }
  // S_1 = 1 + X_1
  CHECK(total_population_mgf(geo, 1).value(-0.3) ==
        doctest::Approx(std::exp(-0.3) * population_mgf(geo, 1).value(-0.3)).epsilon(1e-14));
  CHECK(population_mgf(geo, 0).value(-0.7) == doctest::Approx(std::exp(-0.7)));
}

TEST_CASE("Lotka-Nagaev and Harris bounds") {
  const double p = 0.5;
  const auto geo = make("geometric", {{"p", p}});
  const auto j = offspring_j(geo);
  const std::size_t n = 10;

  auto ln = lotka_nagaev_bound(1.0, n, j, population_mgf(geo, n - 1));
  CHECK(oracle::rel_diff(ln.component("plain"), oracle::kLotkaPlainX1N10) <= 1e-9);
  CHECK(ln.value == ln.component("optimized"));

  auto zero = lotka_nagaev_bound(0.0, n, j, population_mgf(geo, n - 1));
  CHECK(zero.value == 2.0);
  CHECK(has_note(zero, "J(x) = 0"));

  const double k = 37.0;
  auto det = lotka_nagaev_bound(1.0, n, j, bounds::MgfHandle::deterministic(k));
  CHECK(det.component("plain") == doctest::Approx(2.0 * std::exp(-oracle::kJGeom05[1] * k)).epsilon(1e-9));
  auto hdet = harris_bound(1.0, n, j, bounds::MgfHandle::deterministic(k));
  CHECK(oracle::rel_diff(hdet.value, 2.0 * std::exp(-oracle::kJGeom05[1] * k)) <= 1e-6);
  CHECK(harris_bound(0.0, n, j, bounds::MgfHandle::deterministic(k)).value == 2.0);

  for (double x : {0.5, 1.0, 2.0}) {
    for (std::size_t nn : {3u, 6u, 10u}) {
      auto l = lotka_nagaev_bound(x, nn, j, population_mgf(geo, nn - 1));
      auto h = harris_bound(x, nn, j, total_population_mgf(geo, nn - 1));
      CHECK(h.value <= l.value * (1.0 + 1e-9));
    }
  }
  double prev = 3.0;
  for (std::size_t nn = 2; nn <= 12; ++nn) {
    const double v = lotka_nagaev_bound(1.0, nn, j, population_mgf(geo, nn - 1)).value;
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("geometric branching closed form") {
  const double p = 0.5;
  auto b = geometric_branching_bound(1.0, 10, p);
  CHECK(oracle::rel_diff(b.value, oracle::kGeomBranchingX1N10) <= 1e-9);
  const auto j = offspring_j(make("geometric", {{"p", p}}));
  for (double x : {0.5, 1.0, 2.0}) {
    for (std::size_t n : {2u, 5u, 10u}) {
      auto g = geometric_branching_bound(x, n, p);
      auto l = lotka_nagaev_bound(x, n, j, geometric_population_bound_mgf(p, n - 1));
      CHECK(oracle::rel_diff(g.value, l.component("plain")) <= 1e-12);
      CHECK(geometric_branching_bound(x, n + 1, p).value ==
            doctest::Approx(p * g.value).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(geometric_branching_bound(1.0, 10, 1.0), std::invalid_argument);
}
