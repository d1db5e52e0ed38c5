#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "selfnorm/distributions.hpp"
#include "selfnorm/random.hpp"

namespace selfnorm::processes {

/// X_{k+1} = theta phi_k + eps_{k+1} with i.i.d. regressors and centered
/// i.i.d. noise. With coupling != 0 the regressor is phi_k = R_k + coupling *
/// eps_k, so (phi_k, eps_k) are i.i.d. dependent pairs.
struct RegressionModel {
  double theta = 0.0;
  Distribution regressor;
  CenteredVariable noise;
  double coupling = 0.0;

  [[nodiscard]] double noise_variance() const { return noise.variance(); }
};

/// X_{k+1} = theta X_k + eps_{k+1}, eps ~ N(0, sigma2), X_0 ~ N(0, tau2).
struct AR1Model {
  double theta = 0.0;
  double sigma2 = 1.0;
  double tau2 = 1.0;
  bool zero_start = false;  // X_0 = 0; outside the tau2 >= sigma2 assumption
};

/// Galton-Watson process from X_0 = 1.
struct BranchingModel {
  Distribution offspring;

  [[nodiscard]] double mean() const { return offspring.mean(); }
  [[nodiscard]] double variance() const { return offspring.variance(); }
};

/// Terminal estimator values; unset when undefined on the path.
struct Estimates {
  std::optional<double> least_squares;  // theta-hat
  std::optional<double> yule_walker;    // theta-tilde
  std::optional<double> yw_correction;  // f_n = X_n^2 / sum_{k<=n} X_k^2
  std::optional<double> lotka_nagaev;   // X_n / X_{n-1}
  std::optional<double> harris;         // sum X_k / sum X_{k-1}
};

/// A simulated martingale with its variations. Index k runs over 0..n for
/// m, tv, pv and state; increments has n entries.
struct MartingalePath {
  std::vector<double> increments;
  std::vector<double> m;      // M_k
  std::vector<double> tv;     // [M]_k
  std::vector<double> pv;     // <M>_k
  std::vector<double> state;  // phi_k (regression) or X_k
  std::vector<double> noise;  // eps_k, k >= 1 (eps_0 stored as 0 unless coupled)
  Estimates estimates;
  bool extinct = false;
  bool off_assumption = false;

  [[nodiscard]] std::size_t horizon() const noexcept { return increments.size(); }
  [[nodiscard]] double terminal_m() const { return m.back(); }
  [[nodiscard]] double terminal_tv() const { return tv.back(); }
  [[nodiscard]] double terminal_pv() const { return pv.back(); }
};

MartingalePath simulate_regression(const RegressionModel& model, std::size_t n, Rng& rng);
MartingalePath simulate_regression(const RegressionModel& model, std::size_t n,
                                   const Substream& seed);

MartingalePath simulate_ar1(const AR1Model& model, std::size_t n, Rng& rng);
MartingalePath simulate_ar1(const AR1Model& model, std::size_t n, const Substream& seed);

/// Extinct paths (X_k = 0 for some k < n) are flagged and the estimators
/// that divide by a vanishing population are left unset.
MartingalePath simulate_galton_watson(const BranchingModel& model, std::size_t n, Rng& rng);
MartingalePath simulate_galton_watson(const BranchingModel& model, std::size_t n,
                                      const Substream& seed);

/// V_k(t) = exp(t M_k - t^2 ([M]_k + <M>_k) / 2), k = 0..n.
std::vector<double> v_process(const MartingalePath& path, double t);
/// W_k(t) = exp(t M_k - t^2 [M]_k / 2), k = 0..n.
std::vector<double> w_process(const MartingalePath& path, double t);

/// Terminal values without building the whole series.
double v_terminal(const MartingalePath& path, double t);
double w_terminal(const MartingalePath& path, double t);

void validate(const RegressionModel& model);
void validate(const AR1Model& model);
void validate(const BranchingModel& model);

}  // namespace selfnorm::processes
