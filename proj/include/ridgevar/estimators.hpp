#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ridgevar/var.hpp"

namespace ridgevar {

// Diagonal ridge regularizer Lambda acting on beta = vec(B) (column-major:
// coefficient B(k, j) sits at index j*K + k, so each regressor j owns the
// contiguous block [j*K, (j+1)*K)). The intercept column is never penalized
// and is not part of diag.
struct PenaltyMatrix {
  enum class Structure { isotropic, lag_adapted, partitioned, general_diagonal };

  VectorXd diag;  // length K^2 * p, entries >= 0
  Structure structure_tag = Structure::general_diagonal;
  std::optional<VectorXd> lag_values;  // lambda_1..lambda_p when lag_adapted

  static PenaltyMatrix isotropic(double lambda, int K, int p);
  // Family F_l: diag = lag_values (x) ones(K^2), one lambda per lag block.
  static PenaltyMatrix lag_adapted(const VectorXd& lambdas, int K);
  static PenaltyMatrix general_diagonal(const VectorXd& diag);

  void validate(int K, int p) const;
  // Per-regressor penalty (Kp vector) when diag is constant within each
  // regressor block, i.e. Lambda = Lambda_Kp (x) I_K; empty otherwise.
  std::optional<VectorXd> kp_form(int K, int p) const;
};

// Lag partition for asymptotic shrinkage: lags <= split_lag form the freely
// estimated block L_1, lags > split_lag the small-coefficient block L_2.
struct PartitionedPenalty {
  PenaltyMatrix base;
  int split_lag = 0;  // p_bar in [1, p]

  void validate(int K, int p) const;
  // Builds a lag-adapted penalty with lambda_head on lags <= split_lag and
  // lambda_tail on lags > split_lag; tagged partitioned.
  static PartitionedPenalty two_level(double lambda_head, double lambda_tail,
                                      int split_lag, int K, int p);
};

// Output of every estimator. beta_hat is vec([B_hat, nu_hat]) column-major,
// so the intercept coordinates (when present) occupy the trailing K entries.
struct FitResult {
  VectorXd beta_hat;
  MatrixXd B_hat;                  // K x Kp
  std::optional<VectorXd> nu_hat;  // K, present when the fit had an intercept
  MatrixXd sigma_hat;              // K x K residual covariance U U' / T
  MatrixXd gamma_hat;              // Kp x Kp lag-block Z Z' / T
  MatrixXd gamma_full;  // full-regressor Z Z' / T incl. intercept row if any
  MatrixXd residuals;   // K x T
  std::string method_tag;
  std::optional<PenaltyMatrix> penalty;
  std::optional<VectorXd> center;
  int K = 0, p = 0, T = 0;
  bool includes_intercept = false;

  // Lag coefficient matrices A_1..A_p sliced out of B_hat.
  std::vector<MatrixXd> coefficient_matrices() const;
};

// Least squares: B_hat = Y Z' (Z Z')^-1. Requires the Gram matrix condition
// number below 1e12.
FitResult ls_fit(const RegressionData& data);

// Ridge-regularized LS centered at beta_0 (default 0):
//   beta_hat = (ZZ' (x) I_K + Lambda)^-1 ((Z (x) I_K) y + Lambda beta_0).
// When the penalty is expressible as Lambda_Kp (x) I_K the K x Kp matrix
// system (Y Z' + B_0 Lambda_Kp)(Z Z' + Lambda_Kp)^-1 is solved instead; a
// general diagonal decouples into K independent per-equation solves. The
// center has length K^2*p (intercept coordinates are never shrunk).
FitResult rls_fit(const RegressionData& data, const PenaltyMatrix& penalty,
                  const std::optional<VectorXd>& center = std::nullopt);

// GLS-weighted ridge:
//   beta_hat = (Lambda + ZZ' (x) sigma^-1)^-1 (Z (x) sigma^-1) y,
// with sigma a positive-definite innovation covariance (in practice the
// plug-in residual covariance of a preliminary LS fit).
FitResult rls_gls_fit(const RegressionData& data, const PenaltyMatrix& penalty,
                      const MatrixXd& sigma);

// Diagonal prior variances v_{i,jk} of the Minnesota lag-decay prior:
// lambda^2/i^2 on own lags (j = k), theta * lambda^2/i^2 * sigma_j^2/sigma_k^2
// across (j != k) with sigma_j^2 = sigma(j,j), returned in vec(B) order.
VectorXd minnesota_prior_variances(const MatrixXd& sigma, double lambda,
                                   double theta, int K, int p);

// Posterior mean under the Minnesota prior given sigma: equals
// rls_gls_fit with Lambda = V_beta^-1. Requires lambda > 0, theta in (0, 1].
FitResult minnesota_posterior_mean(const RegressionData& data,
                                   const MatrixXd& sigma, double lambda,
                                   double theta);

// Posterior mean of the coefficient matrix under a matrix-normal prior with
// row covariance omega*xi and mean prior_mean_B:
//   B' = ((omega xi)^-1 + ZZ')^-1 (Z Y' + (omega xi)^-1 B_prior'),
// i.e. a centered matrix-form ridge with Lambda_Kp = (omega xi)^-1.
FitResult hierarchical_posterior_mean(const RegressionData& data,
                                      const MatrixXd& omega, double xi,
                                      const MatrixXd& prior_mean_B);

// Local projections: per horizon h in 1..H, the regression of y_{t+h} on
// x_t = (y_t', ..., y_{t-q+1}', 1)'. phi[h] is the K x K block on y_t
// (phi[0] = I); phi_cov[h] is the finite-sample Newey-West covariance of
// vec(phi[h]) with truncation lag floor(1.3 sqrt(T_h)). sigma_hat is the
// residual covariance of an LS VAR(q) on the same series (used to build
// structural responses from the projections).
struct LpResult {
  std::vector<MatrixXd> phi;      // H+1 response matrices, phi[0] = I
  std::vector<MatrixXd> phi_cov;  // H+1 covariances (K^2 x K^2), [0] zero
  MatrixXd sigma_hat;             // K x K
  std::vector<int> T_h;           // effective sample per horizon
  int q = 0;
};
LpResult lp_fit(const MatrixXd& series, int H, int q);

// LP-centered ridge: rls_fit with center = coefficients extracted from local
// projections via the inverse response mapping.
FitResult rlp_fit(const RegressionData& data, const PenaltyMatrix& penalty,
                  const VectorXd& lp_center);

// Coefficient norms of the isotropic ridge path: total |beta| per lambda
// (strictly decreasing in lambda) and per-lag-block Frobenius norms.
struct ShrinkageNorms {
  VectorXd lambdas;
  VectorXd total_norm;   // one entry per lambda
  MatrixXd block_norms;  // n_lambda x p
};
ShrinkageNorms shrinkage_norms(const RegressionData& data,
                               const VectorXd& lambdas);

// Subset LS: least squares on the lags in keep_lags only, zeros elsewhere.
// The limit of rls_fit as the penalties on the complement diverge.
FitResult pseudo_model_selection_limit(const RegressionData& data,
                                       const std::vector<int>& keep_lags);

}  // namespace ridgevar
