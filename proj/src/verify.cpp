#include "selfnorm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "selfnorm/heaviness.hpp"
#include "selfnorm/parallel.hpp"

namespace selfnorm::verify {
namespace {

using processes::MartingalePath;

struct TailChunk {
  std::vector<std::size_t> hits;
  std::size_t excluded = 0;
};

/// Running mean and sum of squared deviations, merged pairwise.
struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    count += 1.0;
    const double d = v - mean;
    mean += d / count;
    m2 += d * (v - mean);
  }
  void merge(const Moments& o) {
    if (o.count == 0.0) return;
    const double total = count + o.count;
    const double d = o.mean - mean;
    mean += d * o.count / total;
    m2 += o.m2 + d * d * count * o.count / total;
    count = total;
  }
  [[nodiscard]] double standard_error() const {
    return count > 1.0 ? std::sqrt(m2 / (count - 1.0) / count) : 0.0;
  }
};

Moments terminal_moments(const PathSource& source, std::size_t trials, std::uint64_t seed,
                         const std::function<double(const MartingalePath&)>& stat) {
  auto chunks = for_each_chunk<Moments>(
      trials, [&](std::size_t begin, std::size_t end, Moments& acc) {
        for (std::size_t i = begin; i < end; ++i) acc.add(stat(source(Substream{seed, i})));
      });
  Moments total;
  for (const auto& c : chunks) total.merge(c);
  return total;
}

void require_trials(std::size_t trials) {
  if (trials < kMinTailTrials) {
    throw std::invalid_argument("at least " + std::to_string(kMinTailTrials) +
                                " trials are required");
  }
}

/// Whether exp(t dM - t^2 dM^2 / 2) has conditional mean at most 1 for
/// every increment of the model.
void require_heavy_side(const ProcessConfig& config, double t) {
  if (t == 0.0) return;
  if (std::holds_alternative<processes::AR1Model>(config)) return;
  const auto* reg = std::get_if<processes::RegressionModel>(&config);
  if (reg == nullptr) {
    throw std::invalid_argument("the W variant is only available for regression and AR(1) paths");
  }
  const auto cls = heaviness::classify(reg->noise).classification;
  if (cls == heaviness::Classification::symmetric) return;
  const Support s = reg->regressor.support();
  const bool nonneg = s.lower >= 0.0 && reg->coupling == 0.0;
  const bool nonpos = s.upper <= 0.0 && reg->coupling == 0.0;
  const bool left_ok = (nonneg && t > 0.0) || (nonpos && t < 0.0);
  const bool right_ok = (nonneg && t < 0.0) || (nonpos && t > 0.0);
  if ((cls == heaviness::Classification::heavy_left && left_ok) ||
      (cls == heaviness::Classification::heavy_right && right_ok)) {
    return;
  }
  throw std::invalid_argument(
      "the W variant needs increments heavy on the side selected by the sign of t");
}

VerificationReport base_report(std::string description, double x, std::size_t n,
                               std::size_t trials, std::uint64_t seed) {
  VerificationReport r;
  r.description = std::move(description);
  r.x = x;
  r.n = n;
  r.trials = trials;
  r.seed = seed;
  return r;
}

Distribution standard_normal() { return make_distribution("normal", {{"m", 0.0}, {"sigma2", 1.0}}); }

Distribution geometric(double p) { return make_distribution("geometric", {{"p", p}}); }

}  // namespace

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::vacuous: return "vacuous";
    case Verdict::off_assumption: return "off-assumption";
  }
  return "unknown";
}

PathSource path_source(const ProcessConfig& config, std::size_t n) {
  if (n < 1) throw std::invalid_argument("horizon n must be at least 1");
  return std::visit(
      [n](const auto& model) -> PathSource {
        using M = std::decay_t<decltype(model)>;
        processes::validate(model);
        return [model, n](const Substream& s) {
          if constexpr (std::is_same_v<M, processes::RegressionModel>) {
            return processes::simulate_regression(model, n, s);
          } else if constexpr (std::is_same_v<M, processes::AR1Model>) {
            return processes::simulate_ar1(model, n, s);
          } else {
            return processes::simulate_galton_watson(model, n, s);
          }
        };
      },
      config);
}

std::vector<VerificationReport> empirical_tails(const PathSource& source,
                                                const std::vector<Predicate>& events,
                                                std::size_t trials, std::uint64_t seed) {
  require_trials(trials);
  const std::size_t k = events.size();
  auto chunks = for_each_chunk<TailChunk>(
      trials, [&](std::size_t begin, std::size_t end, TailChunk& acc) {
        acc.hits.assign(k, 0);
        for (std::size_t i = begin; i < end; ++i) {
          const auto path = source(Substream{seed, i});
          if (path.extinct) {
            ++acc.excluded;
            continue;
          }
          for (std::size_t e = 0; e < k; ++e) {
            try {
              if (events[e](path)) ++acc.hits[e];
            } catch (const std::exception& ex) {
              throw std::runtime_error("event predicate failed on path " + std::to_string(i) +
                                       ": " + ex.what());
            }
          }
        }
      });
  std::vector<std::size_t> hits(k, 0);
  std::size_t excluded = 0;
  for (const auto& c : chunks) {
    for (std::size_t e = 0; e < k; ++e) hits[e] += c.hits[e];
    excluded += c.excluded;
  }
  std::vector<VerificationReport> out;
  out.reserve(k);
  for (std::size_t e = 0; e < k; ++e) {
    auto r = base_report({}, 0.0, 0, trials, seed);
    r.hits = hits[e];
    r.excluded = excluded;
    const double used = static_cast<double>(trials - excluded);
    r.empirical = used > 0.0 ? static_cast<double>(hits[e]) / used : 0.0;
    const double se = used > 0.0 ? std::sqrt(r.empirical * (1.0 - r.empirical) / used) : 0.0;
    r.ci_halfwidth = r.z * se;
    out.push_back(std::move(r));
  }
  return out;
}

VerificationReport empirical_tail(const PathSource& source, const Predicate& event,
                                  std::size_t trials, std::uint64_t seed,
                                  std::string description) {
  auto r = std::move(empirical_tails(source, {event}, trials, seed).front());
  r.description = std::move(description);
  return r;
}

VerificationReport check_domination(VerificationReport partial, double bound_raw, double z) {
  if (!(bound_raw >= 0.0)) throw std::invalid_argument("bound must be nonnegative");
  const double used = static_cast<double>(partial.trials - partial.excluded);
  const double se =
      used > 0.0 ? std::sqrt(partial.empirical * (1.0 - partial.empirical) / used) : 0.0;
  partial.z = z;
  partial.ci_halfwidth = z * se;
  partial.bound_raw = bound_raw;
  partial.theoretical = std::min(bound_raw, 1.0);
  if (partial.excluded > 0) {
    partial.verdict = Verdict::off_assumption;
  } else if (partial.theoretical >= 1.0) {
    partial.verdict = Verdict::vacuous;
  } else {
    partial.verdict = partial.empirical <= partial.theoretical + partial.ci_halfwidth
                          ? Verdict::pass
                          : Verdict::fail;
  }
  return partial;
}

VerificationReport check_domination(VerificationReport partial, const bounds::BoundResult& b,
                                    double z) {
  return check_domination(std::move(partial), b.raw, z);
}

VerificationReport check_domination(VerificationReport partial,
                                    const applications::ApplicationBound& b, double z) {
  return check_domination(std::move(partial), b.value, z);
}

VerificationReport check_supermartingale_mean(const ProcessConfig& config, Variant variant,
                                              double t, std::size_t n, std::size_t trials,
                                              std::uint64_t seed, double z) {
  if (trials < 2) throw std::invalid_argument("at least two trials are required");
  if (variant == Variant::W) require_heavy_side(config, t);
  const auto source = path_source(config, n);
  const auto m = terminal_moments(source, trials, seed, [&](const MartingalePath& p) {
    return variant == Variant::V ? processes::v_terminal(p, t) : processes::w_terminal(p, t);
  });
  auto r = base_report(std::string(variant == Variant::V ? "E[V_n(t)] <= 1" : "E[W_n(t)] <= 1") +
                           ", t = " + std::to_string(t),
                       t, n, trials, seed);
  r.z = z;
  r.empirical = m.mean;
  r.ci_halfwidth = z * m.standard_error();
  r.bound_raw = 1.0;
  r.theoretical = 1.0;
  r.verdict = m.mean <= 1.0 + r.ci_halfwidth ? Verdict::pass : Verdict::fail;
  return r;
}

VerificationReport check_branching_identity(const processes::BranchingModel& model, double t,
                                            std::size_t n, std::size_t trials,
                                            std::uint64_t seed, double z) {
  if (trials < 2) throw std::invalid_argument("at least two trials are required");
  const auto centred = centered(model.offspring);
  const double lt = centred.cgf(t);  // DomainError outside the cgf domain
  const auto source = path_source(model, n);
  const auto m = terminal_moments(source, trials, seed, [&](const MartingalePath& p) {
    double parents = 0.0;  // S_{n-1}
    for (std::size_t k = 0; k + 1 < p.state.size(); ++k) parents += p.state[k];
    return std::exp(t * p.terminal_m() - lt * parents);
  });
  auto r = base_report("E[exp(t M_n - L(t) S_{n-1})] = 1, t = " + std::to_string(t), t, n,
                       trials, seed);
  r.z = z;
  r.empirical = m.mean;
  r.ci_halfwidth = z * m.standard_error();
  r.bound_raw = 1.0;
  r.theoretical = 1.0;
  r.verdict = std::abs(m.mean - 1.0) <= r.ci_halfwidth ? Verdict::pass : Verdict::fail;
  return r;
}

std::vector<VerificationReport> sweep(const std::vector<double>& x_grid,
                                      const std::function<double(double)>& bound,
                                      const std::function<Predicate(double)>& event_family,
                                      const PathSource& source, std::size_t n,
                                      std::size_t trials, std::uint64_t seed, double z) {
  if (x_grid.empty()) return {};
  std::vector<Predicate> events;
  events.reserve(x_grid.size());
  for (double x : x_grid) events.push_back(event_family(x));
  auto partial = empirical_tails(source, events, trials, seed);
  std::vector<VerificationReport> out;
  out.reserve(x_grid.size());
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    partial[i].x = x_grid[i];
    partial[i].n = n;
    out.push_back(check_domination(std::move(partial[i]), bound(x_grid[i]), z));
  }
  return out;
}

namespace {

std::vector<VerificationReport> labelled(std::vector<VerificationReport> reports,
                                         const std::string& text) {
  for (auto& r : reports) r.description = text;
  return reports;
}

}  // namespace

std::vector<VerificationReport> ar1_least_squares_suite(double theta, std::size_t n,
                                                        const std::vector<double>& x_grid,
                                                        std::size_t trials, std::uint64_t seed) {
  const processes::AR1Model model{theta, 1.0, 1.0, false};
  auto reports = sweep(
      x_grid, [n](double x) { return applications::ar1_bound_ls(x, n).value; },
      [theta](double x) -> Predicate {
        return [theta, x](const MartingalePath& p) {
          return p.estimates.least_squares && std::abs(*p.estimates.least_squares - theta) >= x;
        };
      },
      path_source(model, n), n, trials, seed);
  return labelled(std::move(reports), "AR(1) least squares: |theta_hat - theta| >= x");
}

std::vector<VerificationReport> ar1_yule_walker_suite(double theta, std::size_t n,
                                                      const std::vector<double>& x_grid,
                                                      std::size_t trials, std::uint64_t seed) {
  const processes::AR1Model model{theta, 1.0, 1.0, false};
  auto reports = sweep(
      x_grid, [n, theta](double x) { return applications::ar1_bound_yw(x, n, theta).value; },
      [theta](double x) -> Predicate {
        return [theta, x](const MartingalePath& p) {
          return p.estimates.yule_walker &&
                 std::abs(*p.estimates.yule_walker - theta) >= x + std::abs(theta);
        };
      },
      path_source(model, n), n, trials, seed);
  return labelled(std::move(reports), "AR(1) Yule-Walker: |theta_tilde - theta| >= x + |theta|");
}

std::vector<VerificationReport> regression_tail_suite(double p, std::size_t n,
                                                      const std::vector<double>& x_grid,
                                                      std::size_t trials, std::uint64_t seed) {
  const auto noise = centered(make_distribution("bernoulli", {{"p", p}}));
  const processes::RegressionModel model{0.0, standard_normal(), noise, 0.0};
  const double sigma2 = noise.variance();
  const double nn = static_cast<double>(n);
  // sigma2 y / n just above ess sup eps^2 makes the rate infinite.
  const double y = applications::square_sup(noise) * nn / sigma2 * (1.0 + 1e-6);
  const auto h = applications::square_mgf(standard_normal());
  const auto rate = applications::noise_square_rate(noise);
  auto reports = sweep(
      x_grid,
      [&](double x) { return applications::regression_bound(x, y, n, h, rate, sigma2).value; },
      [](double x) -> Predicate {
        return [x](const MartingalePath& p) {
          return p.estimates.least_squares && std::abs(*p.estimates.least_squares) >= x;
        };
      },
      path_source(model, n), n, trials, seed);
  return labelled(std::move(reports), "regression: |theta_hat - theta| >= x");
}

std::vector<VerificationReport> regression_joint_suite(const processes::RegressionModel& model,
                                                       std::size_t n, double y,
                                                       const std::vector<double>& x_grid,
                                                       std::size_t trials, std::uint64_t seed) {
  auto reports = sweep(
      x_grid, [y](double x) { return bounds::joint_variation_bound(x, y).raw; },
      [y](double x) -> Predicate {
        return [x, y](const MartingalePath& p) {
          return std::abs(p.terminal_m()) >= x && p.terminal_tv() + p.terminal_pv() <= y;
        };
      },
      path_source(model, n), n, trials, seed);
  return labelled(std::move(reports), "|M_n| >= x, [M]_n + <M>_n <= y");
}

std::vector<VerificationReport> heavy_left_floor_suite(const processes::RegressionModel& model,
                                                       std::size_t n, double a, double b,
                                                       double y,
                                                       const std::vector<double>& x_grid,
                                                       std::size_t trials, std::uint64_t seed) {
  require_heavy_side(model, 1.0);
  auto reports = sweep(
      x_grid, [=](double x) { return bounds::heavy_left_with_floor(x, y, a, b).raw; },
      [a, b, y](double x) -> Predicate {
        return [=](const MartingalePath& p) {
          const double tv = p.terminal_tv();
          return p.terminal_m() / (a + b * tv) >= x && tv >= y;
        };
      },
      path_source(model, n), n, trials, seed);
  return labelled(std::move(reports), "M_n / (a + b [M]_n) >= x, [M]_n >= y");
}

std::vector<VerificationReport> lotka_nagaev_suite(double p, std::size_t n,
                                                   const std::vector<double>& x_grid,
                                                   std::size_t trials, std::uint64_t seed) {
  const auto offspring = geometric(p);
  const double m = offspring.mean();
  const auto rate = applications::offspring_j(offspring);
  const auto pop = applications::population_mgf(offspring, n - 1);
  auto reports = sweep(
      x_grid, [&](double x) { return applications::lotka_nagaev_bound(x, n, rate, pop).value; },
      [m](double x) -> Predicate {
        return [m, x](const MartingalePath& path) {
          return path.estimates.lotka_nagaev && std::abs(*path.estimates.lotka_nagaev - m) >= x;
        };
      },
      path_source(processes::BranchingModel{offspring}, n), n, trials, seed);
  return labelled(std::move(reports), "Lotka-Nagaev: |m_tilde - m| >= x");
}

std::vector<VerificationReport> harris_suite(double p, std::size_t n,
                                             const std::vector<double>& x_grid,
                                             std::size_t trials, std::uint64_t seed) {
  const auto offspring = geometric(p);
  const double m = offspring.mean();
  const auto rate = applications::offspring_j(offspring);
  const auto total = applications::total_population_mgf(offspring, n - 1);
  auto reports = sweep(
      x_grid, [&](double x) { return applications::harris_bound(x, n, rate, total).value; },
      [m](double x) -> Predicate {
        return [m, x](const MartingalePath& path) {
          return path.estimates.harris && std::abs(*path.estimates.harris - m) >= x;
        };
      },
      path_source(processes::BranchingModel{offspring}, n), n, trials, seed);
  return labelled(std::move(reports), "Harris: |m_hat - m| >= x");
}

}  // namespace selfnorm::verify
