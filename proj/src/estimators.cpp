#include "ridgevar/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "ridgevar/linalg.hpp"

namespace ridgevar {

namespace {

// Shared bookkeeping: assemble a FitResult from the full coefficient matrix
// C = [B, nu] (K x (Kp + intercept)).
FitResult finish_fit(const RegressionData& data, const MatrixXd& coef,
                     std::string method_tag) {
  const int K = data.K(), p = data.p, T = data.T();
  FitResult fit;
  fit.K = K;
  fit.p = p;
  fit.T = T;
  fit.includes_intercept = data.includes_intercept;
  fit.beta_hat = vec(coef);
  fit.B_hat = coef.leftCols(K * p);
  if (data.includes_intercept) fit.nu_hat = coef.col(K * p);
  fit.residuals = data.Y - coef * data.Z;
  fit.sigma_hat = (fit.residuals * fit.residuals.transpose()) / double(T);
  fit.gamma_full = (data.Z * data.Z.transpose()) / double(T);
  fit.gamma_hat = fit.gamma_full.topLeftCorner(K * p, K * p);
  fit.method_tag = std::move(method_tag);
  return fit;
}

// Matrix-form ridge for a (possibly full) symmetric per-regressor penalty:
// solves C (ZZ' + P) = Y Z' + C0 P, where P is (Kp+i) x (Kp+i) with zero
// rows/cols for the intercept.
MatrixXd matrix_ridge(const RegressionData& data, const MatrixXd& penalty_kp,
                      const MatrixXd& c0, const std::string& context) {
  MatrixXd m = data.Z * data.Z.transpose() + penalty_kp;
  MatrixXd rhs = data.Z * data.Y.transpose() + penalty_kp * c0.transpose();
  return solve_sym(m, rhs, context).transpose();
}

// Expand a K^2*p coefficient-space vector (penalty diagonal or center) with
// zeros for the intercept coordinates.
VectorXd pad_intercept(const VectorXd& v, int K, bool intercept) {
  if (!intercept) return v;
  VectorXd out = VectorXd::Zero(v.size() + K);
  out.head(v.size()) = v;
  return out;
}

}  // namespace

PenaltyMatrix PenaltyMatrix::isotropic(double lambda, int K, int p) {
  if (lambda < 0) throw input_error("PenaltyMatrix: negative lambda");
  PenaltyMatrix pen;
  pen.diag = VectorXd::Constant(K * K * p, lambda);
  pen.structure_tag = Structure::isotropic;
  return pen;
}

PenaltyMatrix PenaltyMatrix::lag_adapted(const VectorXd& lambdas, int K) {
  if ((lambdas.array() < 0).any())
    throw input_error("PenaltyMatrix: negative lambda");
  const int p = static_cast<int>(lambdas.size());
  PenaltyMatrix pen;
  pen.diag.resize(K * K * p);
  for (int j = 0; j < p; ++j)
    pen.diag.segment(j * K * K, K * K).setConstant(lambdas(j));
  pen.structure_tag = Structure::lag_adapted;
  pen.lag_values = lambdas;
  return pen;
}

PenaltyMatrix PenaltyMatrix::general_diagonal(const VectorXd& diag) {
  if ((diag.array() < 0).any())
    throw input_error("PenaltyMatrix: negative diagonal entry");
  PenaltyMatrix pen;
  pen.diag = diag;
  pen.structure_tag = Structure::general_diagonal;
  return pen;
}

void PenaltyMatrix::validate(int K, int p) const {
  if (diag.size() != static_cast<long>(K) * K * p)
    throw input_error("PenaltyMatrix: diagonal length != K^2*p");
  if ((diag.array() < 0).any())
    throw input_error("PenaltyMatrix: negative diagonal entry");
  if (structure_tag == Structure::lag_adapted) {
    if (!lag_values || lag_values->size() != p)
      throw input_error("PenaltyMatrix: lag_adapted requires p lag_values");
    for (int j = 0; j < p; ++j)
      if (!(diag.segment(j * K * K, K * K).array() == (*lag_values)(j)).all())
        throw input_error("PenaltyMatrix: diag inconsistent with lag_values");
  }
}

std::optional<VectorXd> PenaltyMatrix::kp_form(int K, int p) const {
  VectorXd kp(K * p);
  for (int j = 0; j < K * p; ++j) {
    const auto block = diag.segment(j * K, K);
    if (!(block.array() == block(0)).all()) return std::nullopt;
    kp(j) = block(0);
  }
  return kp;
}

void PartitionedPenalty::validate(int K, int p) const {
  base.validate(K, p);
  if (split_lag < 1 || split_lag > p)
    throw input_error("PartitionedPenalty: split_lag outside [1, p]");
}

PartitionedPenalty PartitionedPenalty::two_level(double lambda_head,
                                                 double lambda_tail,
                                                 int split_lag, int K, int p) {
  VectorXd lams(p);
  for (int j = 0; j < p; ++j) lams(j) = (j < split_lag) ? lambda_head : lambda_tail;
  PartitionedPenalty part;
  part.base = PenaltyMatrix::lag_adapted(lams, K);
  part.base.structure_tag = PenaltyMatrix::Structure::partitioned;
  part.split_lag = split_lag;
  part.validate(K, p);
  return part;
}

std::vector<MatrixXd> FitResult::coefficient_matrices() const {
  std::vector<MatrixXd> a(p);
  for (int j = 0; j < p; ++j) a[j] = B_hat.middleCols(j * K, K);
  return a;
}

FitResult ls_fit(const RegressionData& data) {
  const int n = data.n_regressors();
  if (data.T() <= n)
    throw input_error("ls_fit: T must exceed the number of regressors");
  MatrixXd gram = data.Z * data.Z.transpose();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  double wmin = es.eigenvalues().minCoeff(), wmax = es.eigenvalues().maxCoeff();
  if (wmin <= 0.0 || wmax / wmin >= 1e12)
    throw numeric_error("ls_fit: singular Gram matrix (condition >= 1e12)");
  MatrixXd coef = matrix_ridge(data, MatrixXd::Zero(n, n),
                               MatrixXd::Zero(data.K(), n), "ls_fit");
  return finish_fit(data, coef, "ls");
}

FitResult rls_fit(const RegressionData& data, const PenaltyMatrix& penalty,
                  const std::optional<VectorXd>& center) {
  const int K = data.K(), p = data.p, n = data.n_regressors();
  penalty.validate(K, p);
  if (center && center->size() != static_cast<long>(K) * K * p)
    throw input_error("rls_fit: center length != K^2*p");

  VectorXd c = center ? *center : VectorXd::Zero(K * K * p);
  MatrixXd c0(K, n);
  c0.leftCols(K * p) = unvec(c, K, K * p);
  if (data.includes_intercept) c0.col(K * p).setZero();

  MatrixXd coef;
  if (auto kp = penalty.kp_form(K, p)) {
    // Kronecker-structured penalty: one matrix solve shared by all equations.
    VectorXd kp_aug = pad_intercept(*kp, 1, data.includes_intercept);
    coef = matrix_ridge(data, MatrixXd(kp_aug.asDiagonal()), c0, "rls_fit");
  } else {
    // General diagonal: the vectorized normal equations decouple by equation;
    // equation k solves (ZZ' + D_k) b_k = Z y_k + D_k c_k with
    // D_k = diag of the penalty entries for row k of B.
    MatrixXd gram = data.Z * data.Z.transpose();
    VectorXd diag_aug = pad_intercept(penalty.diag, K, data.includes_intercept);
    coef.resize(K, n);
    for (int k = 0; k < K; ++k) {
      VectorXd dk(n), ck(n);
      for (int j = 0; j < n; ++j) {
        dk(j) = diag_aug(j * K + k);
        ck(j) = c0(k, j);
      }
      MatrixXd m = gram + MatrixXd(dk.asDiagonal());
      VectorXd rhs = data.Z * data.Y.row(k).transpose() + dk.cwiseProduct(ck);
      coef.row(k) = solve_sym(m, rhs, "rls_fit").transpose();
    }
  }
  FitResult fit = finish_fit(data, coef, "ridge");
  fit.penalty = penalty;
  if (center) fit.center = center;
  return fit;
}

FitResult rls_gls_fit(const RegressionData& data, const PenaltyMatrix& penalty,
                      const MatrixXd& sigma) {
  const int K = data.K(), p = data.p, n = data.n_regressors();
  penalty.validate(K, p);
  if (sigma.rows() != K || sigma.cols() != K)
    throw input_error("rls_gls_fit: sigma dimension mismatch");
  MatrixXd sl = chol_lower(sigma, "rls_gls_fit: sigma");
  MatrixXd sigma_inv = sl.transpose().triangularView<Eigen::Upper>().solve(
      sl.triangularView<Eigen::Lower>().solve(MatrixXd::Identity(K, K)));

  // (ZZ' (x) sigma^-1 + Lambda) beta = vec(sigma^-1 Y Z').
  MatrixXd gram = data.Z * data.Z.transpose();
  VectorXd diag_aug = pad_intercept(penalty.diag, K, data.includes_intercept);
  MatrixXd m = kron(gram, sigma_inv);
  m.diagonal() += diag_aug;
  VectorXd rhs = vec(MatrixXd(sigma_inv * data.Y * data.Z.transpose()));
  VectorXd beta = solve_sym(m, rhs, "rls_gls_fit");

  FitResult fit = finish_fit(data, unvec(beta, K, n), "ridge-gls");
  fit.penalty = penalty;
  return fit;
}

VectorXd minnesota_prior_variances(const MatrixXd& sigma, double lambda,
                                   double theta, int K, int p) {
  if (lambda <= 0) throw input_error("minnesota prior: lambda must be > 0");
  if (!(theta > 0 && theta <= 1))
    throw input_error("minnesota prior: theta outside (0, 1]");
  VectorXd v(K * K * p);
  for (int i = 1; i <= p; ++i)
    for (int k = 0; k < K; ++k)    // regressor variable
      for (int j = 0; j < K; ++j)  // equation
        v(((i - 1) * K + k) * K + j) =
            (j == k) ? lambda * lambda / double(i * i)
                     : theta * lambda * lambda / double(i * i) *
                           (sigma(j, j) / sigma(k, k));
  return v;
}

FitResult minnesota_posterior_mean(const RegressionData& data,
                                   const MatrixXd& sigma, double lambda,
                                   double theta) {
  VectorXd v =
      minnesota_prior_variances(sigma, lambda, theta, data.K(), data.p);
  PenaltyMatrix pen = PenaltyMatrix::general_diagonal(v.cwiseInverse());
  FitResult fit = rls_gls_fit(data, pen, sigma);
  fit.method_tag = "minnesota";
  return fit;
}

FitResult hierarchical_posterior_mean(const RegressionData& data,
                                      const MatrixXd& omega, double xi,
                                      const MatrixXd& prior_mean_B) {
  const int K = data.K(), p = data.p, n = data.n_regressors();
  if (omega.rows() != K * p || omega.cols() != K * p)
    throw input_error("hierarchical_posterior_mean: omega must be Kp x Kp");
  if (xi <= 0) throw input_error("hierarchical_posterior_mean: xi must be > 0");
  if (prior_mean_B.rows() != K || prior_mean_B.cols() != K * p)
    throw input_error("hierarchical_posterior_mean: prior mean must be K x Kp");

  MatrixXd ol = chol_lower(omega * xi, "hierarchical_posterior_mean: omega");
  MatrixXd prior_precision =
      ol.transpose().triangularView<Eigen::Upper>().solve(
          ol.triangularView<Eigen::Lower>().solve(
              MatrixXd::Identity(K * p, K * p)));
  MatrixXd pen_aug = MatrixXd::Zero(n, n);
  pen_aug.topLeftCorner(K * p, K * p) = prior_precision;
  MatrixXd c0(K, n);
  c0.leftCols(K * p) = prior_mean_B;
  if (data.includes_intercept) c0.col(K * p).setZero();

  MatrixXd coef = matrix_ridge(data, pen_aug, c0, "hierarchical_posterior_mean");
  FitResult fit = finish_fit(data, coef, "hierarchical-mean");
  return fit;
}

LpResult lp_fit(const MatrixXd& series, int H, int q) {
  const int K = static_cast<int>(series.rows());
  const int N = static_cast<int>(series.cols());
  if (H < 1) throw input_error("lp_fit: H must be positive");
  if (q < 1) throw input_error("lp_fit: q must be positive");
  if (N <= q + H)
    throw input_error("lp_fit: insufficient sample at horizon H (N <= q + H)");

  LpResult lp;
  lp.q = q;
  lp.phi.resize(H + 1);
  lp.phi_cov.resize(H + 1);
  lp.T_h.resize(H + 1);
  lp.phi[0] = MatrixXd::Identity(K, K);
  lp.phi_cov[0] = MatrixXd::Zero(K * K, K * K);
  lp.T_h[0] = N - q + 1;

  // Impact-scale covariance from an LS VAR(q) on the same series.
  lp.sigma_hat = ls_fit(build_regression(series, q, true)).sigma_hat;

  const int nx = K * q + 1;
  for (int h = 1; h <= H; ++h) {
    const int T_h = N - h - q + 1;  // t in [q-1, N-1-h]
    lp.T_h[h] = T_h;
    if (T_h <= nx)
      throw input_error("lp_fit: insufficient sample at horizon " + std::to_string(h));
    MatrixXd x(nx, T_h), yh(K, T_h);
    for (int i = 0; i < T_h; ++i) {
      const int t = q - 1 + i;
      for (int j = 0; j < q; ++j) x.block(j * K, i, K, 1) = series.col(t - j);
      x(K * q, i) = 1.0;
      yh.col(i) = series.col(t + h);
    }
    MatrixXd gram = x * x.transpose();
    MatrixXd coef =
        solve_sym(gram, MatrixXd(x * yh.transpose()), "lp_fit").transpose();
    lp.phi[h] = coef.leftCols(K);
    MatrixXd u = yh - coef * x;

    // Newey-West long-run covariance of the moment x_t (x) u_{t+h}.
    const int L = static_cast<int>(std::floor(1.3 * std::sqrt(double(T_h))));
    MatrixXd mom(nx * K, T_h);
    for (int i = 0; i < T_h; ++i)
      mom.col(i) = vec(MatrixXd(u.col(i) * x.col(i).transpose())).eval();
    MatrixXd s = (mom * mom.transpose()) / double(T_h);
    for (int l = 1; l <= L; ++l) {
      double w = 1.0 - double(l) / double(L + 1);
      MatrixXd g = (mom.rightCols(T_h - l) * mom.leftCols(T_h - l).transpose()) /
                   double(T_h);
      s += w * (g + g.transpose());
    }
    MatrixXd qinv = solve_sym(gram / double(T_h), MatrixXd::Identity(nx, nx),
                              "lp_fit: covariance");
    MatrixXd qk = kron(qinv, MatrixXd::Identity(K, K));
    MatrixXd cov_full = qk * s * qk / double(T_h);
    lp.phi_cov[h] = cov_full.topLeftCorner(K * K, K * K);
  }
  return lp;
}

FitResult rlp_fit(const RegressionData& data, const PenaltyMatrix& penalty,
                  const VectorXd& lp_center) {
  if (lp_center.size() != static_cast<long>(data.K()) * data.K() * data.p)
    throw input_error("rlp_fit: center dimension mismatch");
  FitResult fit = rls_fit(data, penalty, lp_center);
  fit.method_tag = "rlp";
  return fit;
}

ShrinkageNorms shrinkage_norms(const RegressionData& data,
                               const VectorXd& lambdas) {
  if (lambdas.size() < 2)
    throw input_error("shrinkage_norms: need at least two lambda values");
  for (int i = 1; i < lambdas.size(); ++i)
    if (!(lambdas(i) > lambdas(i - 1)))
      throw input_error("shrinkage_norms: lambdas must be ascending");
  if (lambdas(0) <= 0)
    throw input_error("shrinkage_norms: lambdas must be positive");

  const int K = data.K(), p = data.p;
  ShrinkageNorms out;
  out.lambdas = lambdas;
  out.total_norm.resize(lambdas.size());
  out.block_norms.resize(lambdas.size(), p);
  for (int i = 0; i < lambdas.size(); ++i) {
    FitResult fit = rls_fit(data, PenaltyMatrix::isotropic(lambdas(i), K, p));
    out.total_norm(i) = vec(fit.B_hat).norm();
    for (int j = 0; j < p; ++j)
      out.block_norms(i, j) = fit.B_hat.middleCols(j * K, K).norm();
  }
  return out;
}

FitResult pseudo_model_selection_limit(const RegressionData& data,
                                       const std::vector<int>& keep_lags) {
  const int K = data.K(), p = data.p;
  if (keep_lags.empty())
    throw input_error("pseudo_model_selection_limit: empty lag subset");
  for (int j : keep_lags)
    if (j < 1 || j > p)
      throw input_error("pseudo_model_selection_limit: lag outside 1..p");
  std::vector<int> lags = keep_lags;
  std::sort(lags.begin(), lags.end());
  lags.erase(std::unique(lags.begin(), lags.end()), lags.end());

  const int ns = K * static_cast<int>(lags.size()) +
                 (data.includes_intercept ? 1 : 0);
  RegressionData sub;
  sub.Y = data.Y;
  sub.p = static_cast<int>(lags.size());
  sub.includes_intercept = data.includes_intercept;
  sub.Z.resize(ns, data.T());
  for (size_t i = 0; i < lags.size(); ++i)
    sub.Z.middleRows(i * K, K) = data.Z.middleRows((lags[i] - 1) * K, K);
  if (data.includes_intercept) sub.Z.row(ns - 1) = data.Z.row(K * p);

  Eigen::SelfAdjointEigenSolver<MatrixXd> es(
      MatrixXd(sub.Z * sub.Z.transpose()), Eigen::EigenvaluesOnly);
  double wmin = es.eigenvalues().minCoeff(), wmax = es.eigenvalues().maxCoeff();
  if (wmin <= 0.0 || wmax / wmin >= 1e12)
    throw numeric_error("pseudo_model_selection_limit: singular subset Gram matrix");
  MatrixXd coef_sub = matrix_ridge(sub, MatrixXd::Zero(ns, ns),
                                   MatrixXd::Zero(K, ns),
                                   "pseudo_model_selection_limit");

  // Embed the subset solution into the full coefficient layout.
  MatrixXd coef = MatrixXd::Zero(K, data.n_regressors());
  for (size_t i = 0; i < lags.size(); ++i)
    coef.middleCols((lags[i] - 1) * K, K) = coef_sub.middleCols(i * K, K);
  if (data.includes_intercept) coef.col(K * p) = coef_sub.col(ns - 1);
  FitResult fit = finish_fit(data, coef, "subset-ls");
  return fit;
}

}  // namespace ridgevar
