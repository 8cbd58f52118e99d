#include "ridgevar/var.hpp"

#include <algorithm>

#include "ridgevar/linalg.hpp"

namespace ridgevar {

void VarModel::validate() const {
  const int k = K();
  if (k < 1) throw input_error("VarModel: dimension K must be positive");
  if (p() < 1) throw input_error("VarModel: lag order p must be positive");
  for (const auto& a : A)
    if (a.rows() != k || a.cols() != k)
      throw input_error("VarModel: coefficient matrix dimension mismatch");
  if (sigma_u.rows() != k || sigma_u.cols() != k)
    throw input_error("VarModel: sigma_u dimension mismatch");
  if (!sigma_u.isApprox(sigma_u.transpose(), 1e-12))
    throw input_error("VarModel: sigma_u not symmetric");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sigma_u, Eigen::EigenvaluesOnly);
  double wmax = es.eigenvalues().maxCoeff();
  if (es.eigenvalues().minCoeff() <= 1e-10 * std::max(1.0, wmax))
    throw input_error("VarModel: sigma_u not positive definite");
}

RegressionData build_regression(const MatrixXd& series, int p, bool intercept) {
  const int K = static_cast<int>(series.rows());
  const int N = static_cast<int>(series.cols());
  if (p < 1) throw input_error("build_regression: p must be positive");
  if (N <= p) throw input_error("build_regression: series too short (N <= p)");
  if (!series.allFinite())
    throw input_error("build_regression: series contains non-finite values");

  RegressionData data;
  data.p = p;
  data.includes_intercept = intercept;
  const int T = N - p;
  data.Y = series.rightCols(T);
  data.Z.resize(K * p + (intercept ? 1 : 0), T);
  for (int t = 0; t < T; ++t)
    for (int j = 0; j < p; ++j)
      data.Z.block(j * K, t, K, 1) = series.col(p + t - 1 - j);  // newest lag first
  if (intercept) data.Z.row(K * p).setOnes();
  return data;
}

MatrixXd simulate(const VarModel& model, int T, std::uint64_t seed,
                  const SimulateOptions& opts) {
  model.validate();
  if (T < 1) throw input_error("simulate: T must be positive");
  if (opts.burn_in < 0) throw input_error("simulate: negative burn_in");
  double rho = spectral_radius(model);
  if (rho >= 1.0)
    throw input_error("unstable_dgp: spectral radius " + std::to_string(rho));

  const int K = model.K(), p = model.p();
  MatrixXd L = chol_lower(model.sigma_u, "simulate: sigma_u");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  MatrixXd out(K, T);
  MatrixXd lags = MatrixXd::Zero(K, p);  // column j holds y_{t-1-j}
  VectorXd z(K), y(K);
  for (int t = 0; t < opts.burn_in + T; ++t) {
    for (int i = 0; i < K; ++i) z(i) = opts.draw ? opts.draw(rng) : gauss(rng);
    y = model.nu + L * z;
    for (int j = 0; j < p; ++j) y += model.A[j] * lags.col(j);
    for (int j = p - 1; j > 0; --j) lags.col(j) = lags.col(j - 1);
    lags.col(0) = y;
    if (t >= opts.burn_in) out.col(t - opts.burn_in) = y;
  }
  return out;
}

CompanionMatrix companion(const std::vector<MatrixXd>& A) {
  if (A.empty()) throw input_error("companion: empty coefficient list");
  const int K = static_cast<int>(A[0].rows());
  const int p = static_cast<int>(A.size());
  CompanionMatrix comp;
  comp.K = K;
  comp.p = p;
  comp.matrix = MatrixXd::Zero(K * p, K * p);
  for (int j = 0; j < p; ++j) comp.matrix.block(0, j * K, K, K) = A[j];
  if (p > 1)
    comp.matrix.block(K, 0, K * (p - 1), K * (p - 1)).setIdentity();
  return comp;
}

CompanionMatrix companion(const VarModel& model) { return companion(model.A); }

double spectral_radius(const CompanionMatrix& comp) {
  Eigen::EigenSolver<MatrixXd> es(comp.matrix, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw numeric_error("spectral_radius: eigensolver did not converge");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_stable(const VarModel& model) {
  return spectral_radius(model) < 1.0 - 1e-10;
}

double spectral_radius(const VarModel& model) {
  return spectral_radius(companion(model));
}

MatrixXd sample_autocov(const RegressionData& data) {
  if (data.T() < 1) throw input_error("sample_autocov: empty sample");
  const int kp = data.K() * data.p;
  const auto zl = data.Z.topRows(kp);
  return (zl * zl.transpose()) / static_cast<double>(data.T());
}

double eigenvalue_continuity_check(const MatrixXd& gamma_hat,
                                   const MatrixXd& gamma) {
  if (gamma_hat.rows() != gamma.rows() || gamma_hat.cols() != gamma.cols())
    throw input_error("eigenvalue_continuity_check: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<MatrixXd> eh(gamma_hat, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<MatrixXd> eg(gamma, Eigen::EigenvaluesOnly);
  // SelfAdjointEigenSolver sorts ascending; compare aligned.
  return (eh.eigenvalues() - eg.eigenvalues()).cwiseAbs().maxCoeff();
}

}  // namespace ridgevar
