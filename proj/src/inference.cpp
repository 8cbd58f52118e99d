#include "ridgevar/inference.hpp"

#include <algorithm>
#include <cmath>

#include "ridgevar/linalg.hpp"
#include "ridgevar/parallel.hpp"

namespace ridgevar {

namespace {

// Inverts a symmetric PSD Gram-type matrix with the inference conditioning
// policy: condition number >= 1e12 refuses rather than regularizing.
MatrixXd invert_gamma(const MatrixXd& gamma, const std::string& context) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(gamma, Eigen::EigenvaluesOnly);
  double wmin = es.eigenvalues().minCoeff(), wmax = es.eigenvalues().maxCoeff();
  if (wmin <= 0.0 || wmax / wmin >= 1e12)
    throw numeric_error(context + ": degenerate Gamma (condition >= 1e12)");
  Eigen::LDLT<MatrixXd> ldlt(gamma);
  return ldlt.solve(MatrixXd::Identity(gamma.rows(), gamma.cols()));
}

double median_of(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

AsymptoticCovariance standard_cov(const FitResult& fit,
                                  const std::optional<VectorXd>& lambda0_diag,
                                  const std::optional<VectorXd>& beta0_bar) {
  const int K = fit.K, p = fit.p;
  AsymptoticCovariance cov;
  cov.mode = AsymptoticCovariance::Mode::standard;
  cov.K = K;
  cov.p = p;
  cov.T = fit.T;
  cov.includes_intercept = fit.includes_intercept;
  cov.coeff_cov =
      kron(invert_gamma(fit.gamma_full, "standard_cov"), fit.sigma_hat);
  cov.sigma_cov = sigma_fourth_moment_cov(fit.residuals);

  if (lambda0_diag || beta0_bar) {
    if (!lambda0_diag || !beta0_bar)
      throw input_error("standard_cov: lambda0 and beta0_bar must be supplied together");
    if (lambda0_diag->size() != static_cast<long>(K) * K * p ||
        beta0_bar->size() != static_cast<long>(K) * K * p)
      throw input_error("standard_cov: bias inputs must have length K^2*p");
    MatrixXd gamma_lag_inv = invert_gamma(fit.gamma_hat, "standard_cov: bias");
    VectorXd shift =
        lambda0_diag->cwiseProduct(*beta0_bar - fit.beta_hat.head(K * K * p));
    cov.bias_vector =
        kron(gamma_lag_inv, MatrixXd::Identity(K, K)) * shift;
  }
  return cov;
}

AsymptoticCovariance shrinkage_adjusted_cov(const FitResult& fit,
                                            const PartitionedPenalty& partition,
                                            const VectorXd& Lbar2) {
  const int K = fit.K, p = fit.p;
  partition.validate(K, p);
  const int n_tail = K * (p - partition.split_lag);
  if (Lbar2.size() != n_tail)
    throw input_error("shrinkage_adjusted_cov: Lbar2 length != K*(p - split_lag)");
  if ((Lbar2.array() <= 0).any())
    throw input_error("shrinkage_adjusted_cov: Lbar2 entries must be > 0");

  // Gamma_adj = Gamma_hat + diag(0, Lbar2), intercept row unpenalized.
  const int n = fit.gamma_full.rows();
  VectorXd lam_bar = VectorXd::Zero(n);
  lam_bar.segment(K * partition.split_lag, n_tail) = Lbar2;
  MatrixXd gamma_adj = fit.gamma_full;
  gamma_adj.diagonal() += lam_bar;

  MatrixXd adj_inv = invert_gamma(gamma_adj, "shrinkage_adjusted_cov");
  MatrixXd sandwich = adj_inv * fit.gamma_full * adj_inv;
  sandwich = 0.5 * (sandwich + sandwich.transpose());  // enforce symmetry

  AsymptoticCovariance cov;
  cov.mode = AsymptoticCovariance::Mode::shrinkage_adjusted;
  cov.K = K;
  cov.p = p;
  cov.T = fit.T;
  cov.includes_intercept = fit.includes_intercept;
  cov.coeff_cov = kron(sandwich, fit.sigma_hat);
  cov.sigma_cov = sigma_fourth_moment_cov(fit.residuals);
  return cov;
}

MatrixXd sigma_fourth_moment_cov(const MatrixXd& residuals) {
  const int K = static_cast<int>(residuals.rows());
  const int T = static_cast<int>(residuals.cols());
  if (T <= K * K)
    throw input_error("sigma_fourth_moment_cov: T must exceed K^2");
  MatrixXd omega = MatrixXd::Zero(K * K, K * K);
  VectorXd sbar = VectorXd::Zero(K * K);
  VectorXd w(K * K);
  for (int t = 0; t < T; ++t) {
    const auto u = residuals.col(t);
    for (int j = 0; j < K; ++j) w.segment(j * K, K) = u * u(j);  // vec(u u')
    omega.noalias() += w * w.transpose();
    sbar += w;
  }
  omega /= double(T);
  sbar /= double(T);
  omega -= sbar * sbar.transpose();
  return omega;
}

std::vector<ConsistencyRow> consistency_diagnostics(
    const VarModel& dgp, const ConsistencyConfig& config,
    const std::vector<int>& T_grid, int n_seeds, std::uint64_t seed_base,
    int jobs) {
  dgp.validate();
  if (n_seeds < 1) throw input_error("consistency_diagnostics: n_seeds < 1");
  const int K = dgp.K();
  const int p_fit = config.p_fit > 0 ? config.p_fit : dgp.p();

  // True coefficient vector in the fitted layout (zero-padded if p_fit > p).
  MatrixXd b_true = MatrixXd::Zero(K, K * p_fit);
  for (int j = 0; j < std::min(p_fit, dgp.p()); ++j)
    b_true.middleCols(j * K, K) = dgp.A[j];

  std::vector<ConsistencyRow> rows;
  for (int T : T_grid) {
    std::vector<double> beta_err(n_seeds), sigma_err(n_seeds);
    parallel_for(n_seeds, jobs, [&](int s) {
      MatrixXd series = simulate(dgp, T + p_fit, seed_base + s);
      RegressionData data = build_regression(series, p_fit, config.intercept);
      PenaltyMatrix pen = config.penalty_rule
                              ? config.penalty_rule(data.T(), K, p_fit)
                              : PenaltyMatrix::isotropic(0.0, K, p_fit);
      std::optional<VectorXd> center;
      if (config.center_rule) center = config.center_rule(K, p_fit);
      FitResult fit = rls_fit(data, pen, center);
      beta_err[s] = (fit.B_hat - b_true).norm();
      sigma_err[s] = (fit.sigma_hat - dgp.sigma_u).norm();
    });
    rows.push_back({T, median_of(beta_err), median_of(sigma_err)});
  }
  return rows;
}

}  // namespace ridgevar
