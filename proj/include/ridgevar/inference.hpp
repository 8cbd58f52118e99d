#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ridgevar/estimators.hpp"

namespace ridgevar {

// Estimated asymptotic covariance of sqrt(T)-scaled estimators. coeff_cov is
// ordered like beta_hat (intercept coordinates, when present, receive their
// own rows via the augmented regressor matrix); sigma_cov targets the
// fourth-moment covariance of sqrt(T) vec(sigma_hat - sigma).
struct AsymptoticCovariance {
  enum class Mode { standard, shrinkage_adjusted };

  MatrixXd coeff_cov;  // (K^2 p + K if intercept) square
  MatrixXd sigma_cov;  // K^2 x K^2
  Mode mode = Mode::standard;
  std::optional<VectorXd> bias_vector;  // K^2 p, non-centered limit mean
  int K = 0, p = 0, T = 0;
  bool includes_intercept = false;
};

// coeff_cov = Gamma_hat^-1 (x) sigma_hat over the full regressor block.
// When (lambda0_diag, beta0_bar) are supplied, bias_vector holds the plug-in
// non-centered limit mean (Gamma_hat^-1 (x) I_K) Lambda_0 (beta0_bar -
// beta_hat); it defaults to absent under root-T-negligible penalties.
// Refuses (numeric_error) when Gamma_hat has condition number >= 1e12.
AsymptoticCovariance standard_cov(
    const FitResult& fit,
    const std::optional<VectorXd>& lambda0_diag = std::nullopt,
    const std::optional<VectorXd>& beta0_bar = std::nullopt);

// Sandwich form for penalties with a non-negligible limit on the tail block:
// Gamma_adj = Gamma_hat + diag(0, Lbar2); coeff_cov = Gamma_adj^-1 Gamma_hat
// Gamma_adj^-1 (x) sigma_hat. Lbar2 holds one entry per penalized regressor
// coordinate (length K * (p - split_lag), all > 0); PSD-dominated by the
// standard covariance.
AsymptoticCovariance shrinkage_adjusted_cov(const FitResult& fit,
                                            const PartitionedPenalty& partition,
                                            const VectorXd& Lbar2);

// Plug-in estimate of Omega = E[vec(u u') vec(u u')'] - vec(sigma) vec(sigma)'
// from a K x T residual matrix; valid beyond Gaussian innovations.
MatrixXd sigma_fourth_moment_cov(const MatrixXd& residuals);

// Estimator configuration for the error-vs-T consistency table: penalty (and
// optional center) as functions of the sample size.
struct ConsistencyConfig {
  std::function<PenaltyMatrix(int T, int K, int p)> penalty_rule;
  std::function<VectorXd(int K, int p)> center_rule;  // optional
  int p_fit = 0;          // defaults to the DGP lag order
  bool intercept = false;
};

struct ConsistencyRow {
  int T;
  double median_beta_err;   // median over seeds of |beta_hat - beta|
  double median_sigma_err;  // median over seeds of |sigma_hat - sigma|_F
};

// Median estimation errors across seeds for each sample size in T_grid;
// deterministic given seed_base, parallel across seeds.
std::vector<ConsistencyRow> consistency_diagnostics(
    const VarModel& dgp, const ConsistencyConfig& config,
    const std::vector<int>& T_grid, int n_seeds, std::uint64_t seed_base,
    int jobs = 1);

}  // namespace ridgevar
