#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "grid.hpp"
#include "selfnorm/applications.hpp"
#include "selfnorm/bounds.hpp"
#include "selfnorm/heaviness.hpp"
#include "selfnorm/processes.hpp"
#include "selfnorm/transforms.hpp"
#include "selfnorm/verify.hpp"
#include "table.hpp"

namespace selfnorm::cli {
namespace {

constexpr const char* kStandardNormal = "normal:m=0,sigma2=1";

struct Outcome {
  Table table;
  int status = kExitOk;
  std::vector<std::string> messages;
};

struct OutputOptions {
  std::string out = "-";
  std::string format = "csv";

  void add(CLI::App& app) {
    app.add_option("--out", out, "output file, '-' for standard output")->capture_default_str();
    app.add_option("--format", format, "table format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  }
};

// Catalog law from "--dist name[:key=value,...]" plus per-parameter flags,
// the flags taking precedence.
struct DistOptions {
  std::string dist;
  std::map<std::string, std::optional<double>> values{
      {"p", {}}, {"lambda", {}}, {"a", {}}, {"m", {}}, {"sigma2", {}}, {"value", {}}, {"support", {}}};

  void add(CLI::App& app) {
    app.add_option("--dist", dist, "catalog law, e.g. 'gamma' or 'gamma:a=2,lambda=1'");
    for (auto& [key, v] : values) {
      app.add_option("--" + key, v, "law parameter '" + key + "'");
    }
  }

  [[nodiscard]] Distribution build() const {
    if (dist.empty()) throw std::invalid_argument("--dist: a catalog law is required");
    std::string descriptor = dist;
    bool first = descriptor.find(':') == std::string::npos;
    for (const auto& [key, v] : values) {
      if (!v) continue;
      descriptor += first ? ":" : ",";
      descriptor += key + "=" + format_number(*v);
      first = false;
    }
    try {
      return parse_distribution(descriptor);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(std::string("--dist: ") + e.what());
    }
  }
};

Distribution law_option(const std::string& descriptor, const char* field) {
  try {
    return parse_distribution(descriptor);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string(field) + ": " + e.what());
  }
}

struct ModelOptions {
  std::string model = "ar1";
  double theta = 0.0;
  double sigma2 = 1.0;
  double tau2 = 1.0;
  bool zero_start = false;
  std::string regressor = kStandardNormal;
  std::string noise = kStandardNormal;
  double coupling = 0.0;
  std::string offspring = "geometric:p=0.5";

  void add(CLI::App& app) {
    app.add_option("--model", model, "process model")
        ->check(CLI::IsMember({"ar1", "regression", "branching"}))
        ->capture_default_str();
    app.add_option("--theta", theta, "autoregressive or regression parameter")->capture_default_str();
    app.add_option("--sigma2", sigma2, "AR(1) noise variance")->capture_default_str();
    app.add_option("--tau2", tau2, "AR(1) initial-state variance")->capture_default_str();
    app.add_flag("--zero-start", zero_start, "AR(1) started from X_0 = 0 (off the model assumptions)");
    app.add_option("--regressor", regressor, "regressor law")->capture_default_str();
    app.add_option("--noise", noise, "noise law before centering")->capture_default_str();
    app.add_option("--coupling", coupling, "regressor phi_k = R_k + coupling * eps_k")
        ->capture_default_str();
    app.add_option("--offspring", offspring, "offspring law")->capture_default_str();
  }

  [[nodiscard]] processes::RegressionModel regression() const {
    return {theta, law_option(regressor, "--regressor"), centered(law_option(noise, "--noise")),
            coupling};
  }
  [[nodiscard]] processes::AR1Model ar1() const { return {theta, sigma2, tau2, zero_start}; }
  [[nodiscard]] processes::BranchingModel branching() const {
    return {law_option(offspring, "--offspring")};
  }

  [[nodiscard]] verify::ProcessConfig build() const {
    if (model == "ar1") return ar1();
    if (model == "regression") return regression();
    return branching();
  }
};

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

std::vector<double> required_grid(const std::string& text, const char* field) {
  if (text.empty()) throw std::invalid_argument(std::string(field) + ": a grid is required");
  return parse_grid(text, field);
}

// --- heaviness --------------------------------------------------------------

struct HeavinessCommand {
  OutputOptions output;
  DistOptions dist;
  std::string a_grid;
  std::size_t points = 200;
  double eps = heaviness::kDefaultTolerance;

  CLI::App* add(CLI::App& app) {
    auto* sub = app.add_subcommand("heaviness", "scan H(a) and classify a centered catalog law");
    output.add(*sub);
    dist.add(*sub);
    sub->add_option("--a-grid", a_grid, "truncation levels (list or lo:hi:count)");
    sub->add_option("--points", points, "size of the default geometric grid")->capture_default_str();
    sub->add_option("--eps", eps, "classification tolerance")->capture_default_str();
    return sub;
  }

  [[nodiscard]] Outcome run() const {
    const auto x = centered(dist.build());
    heaviness::GridPolicy policy;
    policy.points = points;
    if (!a_grid.empty()) {
      policy.explicit_grid = parse_grid(a_grid, "--a-grid");
      for (std::size_t i = 0; i < policy.explicit_grid.size(); ++i) {
        if (!(policy.explicit_grid[i] > 0.0) ||
            (i > 0 && !(policy.explicit_grid[i] > policy.explicit_grid[i - 1]))) {
          throw std::invalid_argument("--a-grid: levels must be positive and increasing");
        }
      }
    }
    const auto report = heaviness::classify(x, policy, eps);
    Outcome o{Table({"a", "H", "T_a_mean"})};
    for (std::size_t i = 0; i < report.a_grid.size(); ++i) {
      const double a = report.a_grid[i];
      o.table.add_row({a, report.h_values[i], heaviness::truncated_mean(x, a)});
    }
    o.messages.push_back("classification: " + std::string(to_string(report.classification)));
    o.messages.push_back("min H: " + format_number(report.min_h) +
                         ", max H: " + format_number(report.max_h));
    if (!report.note.empty()) o.messages.push_back("note: " + report.note);
    return o;
  }
};

// --- bound ------------------------------------------------------------------

struct BoundCommand {
  OutputOptions output;
  std::string kind;
  std::string x;
  double y = 1.0;
  double c = 1.0;
  double a = 0.0;
  double b = 1.0;
  double alpha = 1.0;
  std::string sided = "two";
  double lo = -1.0;
  double hi = 1.0;
  std::size_t count = 1;
  std::string variation = "constant";
  double level = 1.0;
  std::size_t n = 10;
  double sigma2 = 1.0;
  double theta = 0.0;
  double p = 0.5;
  double tau2 = 1.0;
  std::string regressor = kStandardNormal;
  std::string noise = kStandardNormal;
  std::string offspring;
  bool pgf_bound = false;

  static const std::vector<std::string>& kinds() {
    static const std::vector<std::string> k{
        "azuma", "freedman", "delapena", "joint-variation", "lower-variation", "variation-ratio",
        "heavy-left-joint", "heavy-left", "heavy-left-floor", "heavy-left-ratio", "subgaussian",
        "regression", "regression-bernoulli", "ar1-ls", "ar1-simple", "ar1-yw", "ar1-mgf",
        "lotka-nagaev", "harris", "geometric-branching"};
    return k;
  }

  CLI::App* add(CLI::App& app) {
    auto* sub = app.add_subcommand("bound", "evaluate a tail bound on a grid of x");
    output.add(*sub);
    sub->add_option("--kind", kind, "bound to evaluate")->required()->check(CLI::IsMember(kinds()));
    sub->add_option("--x", x, "thresholds (list or lo:hi:count)")->required();
    sub->add_option("--y", y, "variation level")->capture_default_str();
    sub->add_option("--c", c, "increment bound (freedman)")->capture_default_str();
    sub->add_option("--a", a, "affine normalisation a")->capture_default_str();
    sub->add_option("--b", b, "affine normalisation b")->capture_default_str();
    sub->add_option("--alpha", alpha, "sub-Gaussian constant")->capture_default_str();
    sub->add_option("--sided", sided, "one- or two-sided form")
        ->check(CLI::IsMember({"one", "two"}))
        ->capture_default_str();
    sub->add_option("--lo", lo, "increment lower end (azuma)")->capture_default_str();
    sub->add_option("--hi", hi, "increment upper end (azuma)")->capture_default_str();
    sub->add_option("--count", count, "number of increments (azuma)")->capture_default_str();
    sub->add_option("--variation", variation, "mgf of the variation process")
        ->check(CLI::IsMember({"constant", "ar1"}))
        ->capture_default_str();
    sub->add_option("--level", level, "value of a constant variation process")->capture_default_str();
    sub->add_option("--n", n, "sample size")->capture_default_str();
    sub->add_option("--sigma2", sigma2, "noise variance for the ar1 variation mgf")->capture_default_str();
    sub->add_option("--theta", theta, "AR(1) parameter (ar1-yw)")->capture_default_str();
    sub->add_option("--p", p, "Bernoulli noise or geometric offspring parameter")->capture_default_str();
    sub->add_option("--tau2", tau2, "Gaussian regressor variance")->capture_default_str();
    sub->add_option("--regressor", regressor, "regressor law (regression)")->capture_default_str();
    sub->add_option("--noise", noise, "noise law before centering (regression)")->capture_default_str();
    sub->add_option("--offspring", offspring, "offspring law (default geometric with --p)");
    sub->add_flag("--pgf-bound", pgf_bound, "lotka-nagaev with the geometric pgf upper bound");
    return sub;
  }

  [[nodiscard]] bounds::MgfHandle variation_mgf() const {
    if (variation == "ar1") return applications::ar1_qv_mgf_handle(n, sigma2);
    return bounds::MgfHandle::deterministic(level);
  }

  [[nodiscard]] Distribution offspring_law() const {
    if (!offspring.empty()) return law_option(offspring, "--offspring");
    return make_distribution("geometric", {{"p", p}});
  }

  [[nodiscard]] Outcome run() const {
    const auto grid = parse_grid(x, "--x");
    const auto side = sided == "one" ? bounds::Sided::one : bounds::Sided::two;
    Outcome o{Table({"x", "bound_raw", "bound_clamped", "argmin_p", "method", "notes"})};
    auto add_basic = [&](double xv, const bounds::BoundResult& r) {
      o.table.add_row({xv, r.raw, r.clamped, r.argmin_p,
                       r.argmin_p ? "optimized" : "closed-form", join(r.notes)});
    };
    auto add_app = [&](double xv, const applications::ApplicationBound& r) {
      std::optional<double> arg;
      for (const auto& [name, v] : r.components) {
        if (name == "argmin_p") arg = v;
      }
      o.table.add_row({xv, r.value, std::min(r.value, 1.0), arg,
                       std::string(applications::to_string(r.method)), join(r.notes)});
    };

    std::function<void(double)> eval;
    if (kind == "azuma") {
      const std::vector<std::pair<double, double>> ranges(count, {lo, hi});
      eval = [&, ranges](double v) { add_basic(v, bounds::azuma_hoeffding(v, ranges)); };
    } else if (kind == "freedman") {
      eval = [&](double v) { add_basic(v, bounds::freedman(v, y, c)); };
    } else if (kind == "delapena") {
      eval = [&](double v) { add_basic(v, bounds::delapena(v, y, side)); };
    } else if (kind == "joint-variation") {
      eval = [&](double v) { add_basic(v, bounds::joint_variation_bound(v, y)); };
    } else if (kind == "lower-variation") {
      eval = [&](double v) { add_basic(v, bounds::lower_variation_bound(v, y, a, b)); };
    } else if (kind == "variation-ratio") {
      const auto mgf = variation_mgf();
      eval = [&, mgf](double v) { add_basic(v, bounds::variation_ratio_bound(v, y, a, b, mgf)); };
    } else if (kind == "heavy-left-joint") {
      eval = [&](double v) { add_basic(v, bounds::heavy_left_joint_bound(v, y)); };
    } else if (kind == "heavy-left") {
      const auto mgf = variation_mgf();
      eval = [&, mgf](double v) { add_basic(v, bounds::heavy_left_self_normalized(v, a, b, mgf)); };
    } else if (kind == "heavy-left-floor") {
      eval = [&](double v) { add_basic(v, bounds::heavy_left_with_floor(v, y, a, b)); };
    } else if (kind == "heavy-left-ratio") {
      const auto mgf = variation_mgf();
      eval = [&, mgf](double v) { add_basic(v, bounds::heavy_left_ratio(v, y, a, b, mgf)); };
    } else if (kind == "subgaussian") {
      const auto mgf = variation_mgf();
      eval = [&, mgf](double v) {
        add_basic(v, bounds::subgaussian_self_normalized(v, a, b, alpha, mgf));
      };
    } else if (kind == "regression") {
      const auto reg = law_option(regressor, "--regressor");
      const auto eps = centered(law_option(noise, "--noise"));
      const auto h = applications::square_mgf(reg);
      const auto rate = applications::noise_square_rate(eps);
      const double s2 = eps.variance();
      eval = [&, h, rate, s2](double v) {
        add_app(v, applications::regression_bound(v, y, n, h, rate, s2));
      };
    } else if (kind == "regression-bernoulli") {
      eval = [&](double v) {
        add_app(v, applications::regression_bernoulli_gaussian_bound(v, n, p, tau2));
      };
    } else if (kind == "ar1-ls") {
      eval = [&](double v) { add_app(v, applications::ar1_bound_ls(v, n)); };
    } else if (kind == "ar1-simple") {
      eval = [&](double v) { add_app(v, applications::ar1_bound_simple(v, n)); };
    } else if (kind == "ar1-yw") {
      eval = [&](double v) { add_app(v, applications::ar1_bound_yw(v, n, theta, side)); };
    } else if (kind == "ar1-mgf") {
      eval = [&](double v) { add_app(v, applications::ar1_bound_via_mgf(v, n)); };
    } else if (kind == "lotka-nagaev") {
      const auto law = offspring_law();
      const auto rate = applications::offspring_j(law);
      if (n < 2) throw std::invalid_argument("--n: the estimator needs n >= 2");
      const auto pop = pgf_bound ? applications::geometric_population_bound_mgf(p, n - 1)
                                 : applications::population_mgf(law, n - 1);
      eval = [&, rate, pop](double v) {
        add_app(v, applications::lotka_nagaev_bound(v, n, rate, pop));
      };
    } else if (kind == "harris") {
      const auto law = offspring_law();
      const auto rate = applications::offspring_j(law);
      if (n < 2) throw std::invalid_argument("--n: the estimator needs n >= 2");
      const auto total = applications::total_population_mgf(law, n - 1);
      eval = [&, rate, total](double v) {
        add_app(v, applications::harris_bound(v, n, rate, total));
      };
    } else {
      eval = [&](double v) { add_app(v, applications::geometric_branching_bound(v, n, p)); };
    }
    for (double v : grid) eval(v);
    return o;
  }
};

// --- transform --------------------------------------------------------------

struct TransformCommand {
  OutputOptions output;
  bool solve_yx = false;
  bool cramer_h = false;
  bool ell = false;
  bool fenchel = false;
  bool ldp_ls = false;
  bool ldp_yw = false;
  bool offspring_j = false;
  std::string x;
  double y = 1.0;
  double t_lo = 0.0;
  double t_hi = 1.0;
  double theta = 0.0;
  DistOptions dist;

  CLI::App* add(CLI::App& app) {
    auto* sub = app.add_subcommand("transform", "evaluate a one-dimensional transform on a grid");
    output.add(*sub);
    auto* group = sub->add_option_group("operation", "exactly one operation");
    group->add_flag("--solve-yx", solve_yx, "root y of (1 + y) log(1 + y) - y = x^2");
    group->add_flag("--cramer-h", cramer_h, "h(x) = (1 + x) log(1 + x) - x");
    group->add_flag("--ell", ell, "log(1 + y) / (x^2 + y) at the given --y");
    group->add_flag("--fenchel", fenchel, "sup over [t-lo, t-hi] of x t - L(t), L the centered cgf");
    group->add_flag("--ldp-ls", ldp_ls, "AR(1) least-squares rate function");
    group->add_flag("--ldp-yw", ldp_yw, "AR(1) Yule-Walker rate function");
    group->add_flag("--offspring-j", offspring_j, "min(I(x), I(-x)) for a centered offspring law");
    group->require_option(1);
    sub->add_option("--x,--input", x, "inputs (list or lo:hi:count)")->required();
    sub->add_option("--y", y, "second argument of --ell")->capture_default_str();
    sub->add_option("--t-lo", t_lo, "lower end of the --fenchel interval")->capture_default_str();
    sub->add_option("--t-hi", t_hi, "upper end of the --fenchel interval")->capture_default_str();
    sub->add_option("--theta", theta, "AR(1) parameter for the rate functions")->capture_default_str();
    dist.add(*sub);
    return sub;
  }

  [[nodiscard]] Outcome run() const {
    const auto grid = parse_grid(x, "--x");
    Outcome o{Table({"input", "value", "arg", "residual", "boundary_flag"})};
    auto add = [&](double in, const transforms::TransformResult& r) {
      o.table.add_row({in, r.value, r.arg, r.residual, r.boundary});
    };
    if (solve_yx) {
      for (double v : grid) add(v, transforms::solve_yx(v));
    } else if (cramer_h) {
      for (double v : grid) add(v, {transforms::cramer_h(v), v, 0.0, false, false});
    } else if (ell) {
      for (double v : grid) add(v, {transforms::ar1_ell(y, v), y, 0.0, false, false});
    } else if (fenchel) {
      if (!(t_lo <= t_hi)) throw std::invalid_argument("--t-lo: must not exceed --t-hi");
      const auto law = centered(dist.build());
      auto cgf = [&law](double t) { return law.cgf(t); };
      for (double v : grid) add(v, transforms::fenchel_legendre(cgf, v, t_lo, t_hi));
    } else if (ldp_ls || ldp_yw) {
      for (double v : grid) {
        const auto r = transforms::ar1_ldp_rates(v, theta);
        add(v, ldp_ls ? r.least_squares : r.yule_walker);
      }
    } else {
      const auto law = dist.build();
      for (double v : grid) {
        const auto r = applications::offspring_rate(law, v);
        const auto& side = r.upper.value <= r.lower.value ? r.upper : r.lower;
        add(v, {r.j, side.arg, side.residual, side.boundary, false});
      }
    }
    return o;
  }
};

// --- simulate ---------------------------------------------------------------

struct SimulateCommand {
  OutputOptions output;
  ModelOptions model;
  std::size_t n = 10;
  std::size_t paths = 1;
  std::uint64_t seed = 0;
  bool series = false;

  CLI::App* add(CLI::App& app) {
    auto* sub = app.add_subcommand("simulate", "simulate martingale paths of a model");
    output.add(*sub);
    model.add(*sub);
    sub->add_option("--n", n, "horizon")->capture_default_str();
    sub->add_option("--paths,--trials", paths, "number of paths")->capture_default_str();
    sub->add_option("--seed", seed, "master seed; path i uses substream (seed, i)")
        ->capture_default_str();
    sub->add_flag("--series", series, "one row per time step instead of terminal values");
    return sub;
  }

  [[nodiscard]] Outcome run() const {
    if (n < 1) throw std::invalid_argument("--n: must be at least 1");
    if (paths < 1) throw std::invalid_argument("--paths: must be at least 1");
    const auto source = verify::path_source(model.build(), n);
    Outcome o{series ? Table({"path", "k", "m", "tv", "pv", "state"})
                     : Table({"path", "m", "tv", "pv", "state", "least_squares", "yule_walker",
                              "yw_correction", "lotka_nagaev", "harris", "extinct",
                              "off_assumption"})};
    for (std::size_t i = 0; i < paths; ++i) {
      const auto path = source(Substream{seed, i});
      const std::uint64_t id = i;
      if (series) {
        for (std::size_t k = 0; k <= path.horizon(); ++k) {
          o.table.add_row({id, std::uint64_t{k}, path.m[k], path.tv[k], path.pv[k], path.state[k]});
        }
      } else {
        const auto& e = path.estimates;
        o.table.add_row({id, path.terminal_m(), path.terminal_tv(), path.terminal_pv(),
                         path.state.back(), e.least_squares, e.yule_walker, e.yw_correction,
                         e.lotka_nagaev, e.harris, path.extinct, path.off_assumption});
      }
    }
    return o;
  }
};

// --- verify -----------------------------------------------------------------

struct VerifyCommand {
  OutputOptions output;
  ModelOptions model;
  std::string check = "tail";
  std::string event;
  std::string x;
  std::string t;
  std::size_t n = 100;
  std::size_t trials = 100000;
  std::uint64_t seed = 42;
  double z = verify::kDefaultZ;
  double p = 0.5;
  double y = 1.0;
  double a = 0.0;
  double b = 1.0;

  CLI::App* add(CLI::App& app) {
    auto* sub = app.add_subcommand("verify", "Monte Carlo check of a bound or a mean condition");
    output.add(*sub);
    model.add(*sub);
    sub->add_option("--check", check, "tail domination, supermartingale mean or branching identity")
        ->check(CLI::IsMember({"tail", "mean-v", "mean-w", "identity"}))
        ->capture_default_str();
    sub->add_option("--event", event,
                    "tail event: ls|yw (ar1), estimator|joint|floor (regression), "
                    "lotka|harris (branching)");
    sub->add_option("--x", x, "thresholds for tail checks (list or lo:hi:count)");
    sub->add_option("--t", t, "exponents for mean and identity checks (list or lo:hi:count)");
    sub->add_option("--n", n, "horizon")->capture_default_str();
    sub->add_option("--trials", trials, "Monte Carlo paths")->capture_default_str();
    sub->add_option("--seed", seed, "master seed")->capture_default_str();
    sub->add_option("--z", z, "slack in standard errors")->capture_default_str();
    sub->add_option("--p", p, "Bernoulli noise (estimator) or geometric offspring parameter")
        ->capture_default_str();
    sub->add_option("--y", y, "variation level of the joint and floor events")->capture_default_str();
    sub->add_option("--a", a, "affine normalisation a (floor)")->capture_default_str();
    sub->add_option("--b", b, "affine normalisation b (floor)")->capture_default_str();
    return sub;
  }

  [[nodiscard]] std::vector<verify::VerificationReport> tail() const {
    const auto grid = required_grid(x, "--x");
    const std::string& m = model.model;
    const std::string e =
        !event.empty() ? event : m == "ar1" ? "ls" : m == "regression" ? "estimator" : "lotka";
    auto mismatch = [&] {
      return std::invalid_argument("--event: '" + e + "' is not defined for model '" + m + "'");
    };
    if (m == "ar1") {
      if (e == "ls") return verify::ar1_least_squares_suite(model.theta, n, grid, trials, seed);
      if (e == "yw") return verify::ar1_yule_walker_suite(model.theta, n, grid, trials, seed);
      throw mismatch();
    }
    if (m == "regression") {
      if (e == "estimator") return verify::regression_tail_suite(p, n, grid, trials, seed);
      if (e == "joint") {
        return verify::regression_joint_suite(model.regression(), n, y, grid, trials, seed);
      }
      if (e == "floor") {
        return verify::heavy_left_floor_suite(model.regression(), n, a, b, y, grid, trials, seed);
      }
      throw mismatch();
    }
    if (n < 2) throw std::invalid_argument("--n: the estimators need n >= 2");
    if (e == "lotka") return verify::lotka_nagaev_suite(p, n, grid, trials, seed);
    if (e == "harris") return verify::harris_suite(p, n, grid, trials, seed);
    throw mismatch();
  }

  [[nodiscard]] Outcome run() const {
    if (n < 1) throw std::invalid_argument("--n: must be at least 1");
    if (check == "tail" && trials < verify::kMinTailTrials) {
      throw std::invalid_argument("--trials: tail checks need at least " +
                                  std::to_string(verify::kMinTailTrials) + " trials");
    }
    if (trials < 2) throw std::invalid_argument("--trials: at least 2 trials are required");
    std::vector<verify::VerificationReport> reports;
    if (check == "tail") {
      for (auto& r : tail()) reports.push_back(verify::check_domination(r, r.bound_raw, z));
    } else {
      const auto grid = required_grid(t, "--t");
      if (check == "identity") {
        if (model.model != "branching") {
          throw std::invalid_argument("--check: identity needs --model branching");
        }
        const auto gw = model.branching();
        for (double tv : grid) {
          reports.push_back(verify::check_branching_identity(gw, tv, n, trials, seed, z));
        }
      } else {
        const auto config = model.build();
        const auto variant = check == "mean-v" ? verify::Variant::V : verify::Variant::W;
        for (double tv : grid) {
          reports.push_back(
              verify::check_supermartingale_mean(config, variant, tv, n, trials, seed, z));
        }
      }
    }
    Outcome o{Table({"x", "n", "trials", "hits", "empirical", "ci_halfwidth", "bound_raw",
                     "bound_clamped", "verdict", "seed"})};
    std::map<std::string, int> tally;
    for (const auto& r : reports) {
      o.table.add_row({r.x, std::uint64_t{r.n}, std::uint64_t{r.trials}, std::uint64_t{r.hits},
                       r.empirical, r.ci_halfwidth, r.bound_raw, r.theoretical,
                       std::string(verify::to_string(r.verdict)), std::uint64_t{r.seed}});
      ++tally[std::string(verify::to_string(r.verdict))];
      if (r.verdict == verify::Verdict::fail) o.status = kExitFailVerdict;
    }
    if (!reports.empty() && !reports.front().description.empty()) {
      o.messages.push_back("event: " + reports.front().description);
    }
    std::string summary;
    for (const auto& [name, k] : tally) {
      summary += (summary.empty() ? "" : ", ") + name + ": " + std::to_string(k);
    }
    o.messages.push_back("verdicts: " + summary);
    return o;
  }
};

int emit(const Outcome& outcome, const OutputOptions& options, std::ostream& out,
         std::ostream& err) {
  std::ostringstream text;
  write_table(outcome.table, options.format == "json" ? Format::json : Format::csv, text);
  if (options.out == "-") {
    out << text.str();
    out.flush();
  } else {
    std::ofstream file(options.out, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "error: --out: cannot open '" << options.out << "' for writing\n";
      return kExitInvalid;
    }
    file << text.str();
    file.close();
    if (!file) {
      err << "error: --out: failed writing '" << options.out << "'\n";
      return kExitInvalid;
    }
  }
  for (const auto& m : outcome.messages) err << m << '\n';
  return outcome.status;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tail bounds for self-normalized martingales, with Monte Carlo checks", "selfnorm"};
  app.set_config("--config", "", "TOML or INI file with option values; flags override it");
  app.require_subcommand(1);
  std::optional<std::size_t> threads;
  app.add_option("--threads", threads, "worker threads (default: SELFNORM_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  HeavinessCommand heaviness_cmd;
  BoundCommand bound_cmd;
  TransformCommand transform_cmd;
  SimulateCommand simulate_cmd;
  VerifyCommand verify_cmd;
  auto* heaviness_app = heaviness_cmd.add(app);
  auto* bound_app = bound_cmd.add(app);
  auto* transform_app = transform_cmd.add(app);
  auto* simulate_app = simulate_cmd.add(app);
  auto* verify_app = verify_cmd.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  if (threads) ::setenv("SELFNORM_THREADS", std::to_string(*threads).c_str(), 1);

  try {
    if (heaviness_app->parsed()) return emit(heaviness_cmd.run(), heaviness_cmd.output, out, err);
    if (bound_app->parsed()) return emit(bound_cmd.run(), bound_cmd.output, out, err);
    if (transform_app->parsed()) return emit(transform_cmd.run(), transform_cmd.output, out, err);
    if (simulate_app->parsed()) return emit(simulate_cmd.run(), simulate_cmd.output, out, err);
    if (verify_app->parsed()) return emit(verify_cmd.run(), verify_cmd.output, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace selfnorm::cli
