#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "selfnorm/applications.hpp"
#include "selfnorm/bounds.hpp"
#include "selfnorm/processes.hpp"

namespace selfnorm::verify {

enum class Verdict { pass, fail, vacuous, off_assumption };
std::string_view to_string(Verdict v) noexcept;

inline constexpr double kDefaultZ = 3.0;
inline constexpr std::size_t kMinTailTrials = 1000;

/// One Monte Carlo check. For tail checks `empirical` is hits / trials and
/// `theoretical` the clamped bound; for mean checks `empirical` is the sample
/// mean and `theoretical` the target value.
struct VerificationReport {
  std::string description;
  double x = 0.0;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::size_t hits = 0;
  std::size_t excluded = 0;  // paths outside the model assumptions
  double empirical = 0.0;
  double ci_halfwidth = 0.0;
  double bound_raw = 0.0;
  double theoretical = 0.0;
  double z = kDefaultZ;
  Verdict verdict = Verdict::fail;
  std::uint64_t seed = 0;
};

using PathSource = std::function<processes::MartingalePath(const Substream&)>;
using Predicate = std::function<bool(const processes::MartingalePath&)>;

using ProcessConfig =
    std::variant<processes::RegressionModel, processes::AR1Model, processes::BranchingModel>;

/// Path i is generated from Substream{seed, i}.
PathSource path_source(const ProcessConfig& config, std::size_t n);

/// Frequency of the event over `trials` paths. Extinct branching paths are
/// excluded from the count and reported in `excluded`. A predicate that
/// throws aborts the run with the path index in the message.
VerificationReport empirical_tail(const PathSource& source, const Predicate& event,
                                  std::size_t trials, std::uint64_t seed,
                                  std::string description = {});
/// Several events evaluated on the same paths.
std::vector<VerificationReport> empirical_tails(const PathSource& source,
                                                const std::vector<Predicate>& events,
                                                std::size_t trials, std::uint64_t seed);

/// Fills bound and verdict: vacuous when the clamped bound is 1, pass when
/// empirical <= bound + z SE, off-assumption when paths were excluded.
VerificationReport check_domination(VerificationReport partial, double bound_raw,
                                    double z = kDefaultZ);
VerificationReport check_domination(VerificationReport partial, const bounds::BoundResult& b,
                                    double z = kDefaultZ);
VerificationReport check_domination(VerificationReport partial,
                                    const applications::ApplicationBound& b,
                                    double z = kDefaultZ);

enum class Variant { V, W };

/// Sample mean of V_n(t) or W_n(t) against 1 + z SE. The W variant needs
/// increments that are conditionally heavy on the side selected by t.
VerificationReport check_supermartingale_mean(const ProcessConfig& config, Variant variant,
                                              double t, std::size_t n, std::size_t trials,
                                              std::uint64_t seed, double z = kDefaultZ);

/// Two-sided check of E[exp(t M_n - L(t) S_{n-1})] = 1.
VerificationReport check_branching_identity(const processes::BranchingModel& model, double t,
                                            std::size_t n, std::size_t trials,
                                            std::uint64_t seed, double z = kDefaultZ);

/// One report per grid point; all events share the same paths.
std::vector<VerificationReport> sweep(const std::vector<double>& x_grid,
                                      const std::function<double(double)>& bound,
                                      const std::function<Predicate(double)>& event_family,
                                      const PathSource& source, std::size_t n,
                                      std::size_t trials, std::uint64_t seed,
                                      double z = kDefaultZ);

// Standard suites.

/// |theta-hat - theta| >= x against 2 exp(-n x^2 / (2 (1 + y_x))).
std::vector<VerificationReport> ar1_least_squares_suite(double theta, std::size_t n,
                                                        const std::vector<double>& x_grid,
                                                        std::size_t trials, std::uint64_t seed);
/// |theta-tilde - theta| >= x + |theta| against the same bound.
std::vector<VerificationReport> ar1_yule_walker_suite(double theta, std::size_t n,
                                                      const std::vector<double>& x_grid,
                                                      std::size_t trials, std::uint64_t seed);
/// |theta-hat - theta| >= x for phi ~ N(0, 1), eps centered Bernoulli(p), with y
/// chosen so that the rate term vanishes.
std::vector<VerificationReport> regression_tail_suite(double p, std::size_t n,
                                                      const std::vector<double>& x_grid,
                                                      std::size_t trials, std::uint64_t seed);
/// |M_n| >= x, [M]_n + <M>_n <= y on regression paths.
std::vector<VerificationReport> regression_joint_suite(const processes::RegressionModel& model,
                                                       std::size_t n, double y,
                                                       const std::vector<double>& x_grid,
                                                       std::size_t trials, std::uint64_t seed);
/// M_n / (a + b [M]_n) >= x, [M]_n >= y on a heavy-left regression.
std::vector<VerificationReport> heavy_left_floor_suite(const processes::RegressionModel& model,
                                                       std::size_t n, double a, double b,
                                                       double y,
                                                       const std::vector<double>& x_grid,
                                                       std::size_t trials, std::uint64_t seed);
/// |X_n / X_{n-1} - m| >= x for geometric offspring on {1, 2, ...}, against the
/// optimised bound with the exact population mgf.
std::vector<VerificationReport> lotka_nagaev_suite(double p, std::size_t n,
                                                   const std::vector<double>& x_grid,
                                                   std::size_t trials, std::uint64_t seed);
/// Harris estimator counterpart.
std::vector<VerificationReport> harris_suite(double p, std::size_t n,
                                             const std::vector<double>& x_grid,
                                             std::size_t trials, std::uint64_t seed);

}  // namespace selfnorm::verify
