#include "ridgevar/irf.hpp"

#include <algorithm>
#include <cmath>

#include "ridgevar/linalg.hpp"

namespace ridgevar {

namespace {

// Derivative of the lower Cholesky factor: d vec(P) / d vec(S)' for S = PP',
// via the elimination-matrix construction
//   H = L' [ L (I + K_nn) (P (x) I) L' ]^-1 L.
MatrixXd chol_derivative(const MatrixXd& chol_p) {
  const int n = static_cast<int>(chol_p.rows());
  MatrixXd l = elimination_matrix(n);
  MatrixXd inner = l *
                   (MatrixXd::Identity(n * n, n * n) + commutation_matrix(n, n)) *
                   kron(chol_p, MatrixXd::Identity(n, n)) * l.transpose();
  Eigen::PartialPivLU<MatrixXd> lu(inner);
  if ((inner * lu.inverse() - MatrixXd::Identity(inner.rows(), inner.cols()))
          .cwiseAbs()
          .maxCoeff() > 1e-6)
    throw numeric_error("chol_derivative: elimination system singular");
  return l.transpose() * lu.solve(l);
}

MatrixXd permutation_from_order(const std::vector<int>& ordering, int K) {
  MatrixXd perm = MatrixXd::Zero(K, K);
  std::vector<bool> seen(K, false);
  if (static_cast<int>(ordering.size()) != K)
    throw input_error("structural_irf: ordering length != K");
  for (int i = 0; i < K; ++i) {
    int v = ordering[i];
    if (v < 0 || v >= K || seen[v])
      throw input_error("structural_irf: ordering is not a permutation");
    seen[v] = true;
    perm(i, v) = 1.0;
  }
  return perm;
}

}  // namespace

std::vector<MatrixXd> ma_coefficients(const std::vector<MatrixXd>& A, int H) {
  if (H < 0) throw input_error("ma_coefficients: negative horizon");
  const int p = static_cast<int>(A.size());
  if (p < 1) throw input_error("ma_coefficients: empty coefficient list");
  const int K = static_cast<int>(A[0].rows());
  std::vector<MatrixXd> phi(H + 1);
  phi[0] = MatrixXd::Identity(K, K);
  for (int h = 1; h <= H; ++h) {
    phi[h] = MatrixXd::Zero(K, K);
    for (int j = 1; j <= std::min(h, p); ++j) phi[h] += phi[h - j] * A[j - 1];
  }
  return phi;
}

std::vector<MatrixXd> ma_coefficients(const VarModel& model, int H) {
  return ma_coefficients(model.A, H);
}

IrfResult structural_irf(const FitResult& fit, int H,
                         const std::vector<int>& ordering) {
  IrfResult irf;
  irf.H = H;
  irf.reduced_form = ma_coefficients(fit.coefficient_matrices(), H);
  MatrixXd impact;
  if (ordering.empty()) {
    impact = chol_lower(fit.sigma_hat, "structural_irf: sigma_hat");
  } else {
    // Factor in the requested recursive order, report in input order.
    MatrixXd perm = permutation_from_order(ordering, fit.K);
    MatrixXd chol_perm = chol_lower(
        MatrixXd(perm * fit.sigma_hat * perm.transpose()), "structural_irf");
    impact = perm.transpose() * chol_perm;
  }
  irf.theta.resize(H + 1);
  for (int h = 0; h <= H; ++h) irf.theta[h] = irf.reduced_form[h] * impact;
  return irf;
}

IrfGradients irf_gradients(const FitResult& fit, int H) {
  const int K = fit.K, p = fit.p;
  const int kk = K * K, nb = kk * p;
  std::vector<MatrixXd> a = fit.coefficient_matrices();
  std::vector<MatrixXd> phi = ma_coefficients(a, H);
  MatrixXd chol_p = chol_lower(fit.sigma_hat, "irf_gradients: sigma_hat");
  MatrixXd dchol = chol_derivative(chol_p);
  MatrixXd eye = MatrixXd::Identity(K, K);

  // dvec(Phi_h)/dbeta' by differentiating the recursion:
  //   C_h = sum_j (A_j' (x) I) C_{h-j} + [0 ... I (x) Phi_{h-j} ... 0].
  std::vector<MatrixXd> c(H + 1);
  c[0] = MatrixXd::Zero(kk, nb);
  for (int h = 1; h <= H; ++h) {
    c[h] = MatrixXd::Zero(kk, nb);
    for (int j = 1; j <= std::min(h, p); ++j) {
      if (h - j > 0) c[h] += kron(a[j - 1].transpose(), eye) * c[h - j];
      c[h].middleCols((j - 1) * kk, kk) += kron(eye, phi[h - j]);
    }
  }

  IrfGradients g;
  g.d_beta.resize(H + 1);
  g.d_sigma.resize(H + 1);
  MatrixXd pt_kron = kron(chol_p.transpose(), eye);  // vec(Phi P) wrt Phi
  for (int h = 0; h <= H; ++h) {
    g.d_beta[h] = pt_kron * c[h];
    g.d_sigma[h] = kron(eye, phi[h]) * dchol;
  }
  return g;
}

IrfResult delta_method_bands(const FitResult& fit,
                             const AsymptoticCovariance& cov, int H,
                             double level, bool normalize) {
  const int K = fit.K, p = fit.p;
  if (cov.K != K || cov.p != p || cov.T != fit.T ||
      cov.includes_intercept != fit.includes_intercept)
    throw input_error("delta_method_bands: mismatched fit and covariance");
  if (!(level > 0.0 && level < 1.0))
    throw input_error("delta_method_bands: level outside (0,1)");

  IrfResult irf = structural_irf(fit, H);
  IrfGradients g = irf_gradients(fit, H);
  const int kk = K * K, nb = kk * p;
  const MatrixXd coeff_block = cov.coeff_cov.topLeftCorner(nb, nb);
  const double z = normal_quantile(0.5 * (1.0 + level));
  const double scale = z / std::sqrt(double(fit.T));

  irf.level = level;
  irf.normalized = normalize;
  irf.lower.resize(H + 1);
  irf.upper.resize(H + 1);
  std::vector<MatrixXd> theta_norm(normalize ? H + 1 : 0);
  VectorXd impact_diag(K);
  for (int m = 0; m < K; ++m) impact_diag(m) = irf.theta[0](m, m);

  for (int h = 0; h <= H; ++h) {
    MatrixXd se(K, K);
    if (!normalize) {
      MatrixXd v = g.d_beta[h] * coeff_block * g.d_beta[h].transpose() +
                   g.d_sigma[h] * cov.sigma_cov * g.d_sigma[h].transpose();
      for (int m = 0; m < K; ++m)
        for (int k = 0; k < K; ++k)
          se(k, m) = std::sqrt(std::max(0.0, v(m * K + k, m * K + k)));
    } else {
      // theta_km(h)/theta_mm(0): row-wise quotient-rule gradients.
      for (int m = 0; m < K; ++m) {
        const double d0 = impact_diag(m);
        for (int k = 0; k < K; ++k) {
          const int idx = m * K + k, idx0 = m * K + m;
          VectorXd gb = g.d_beta[h].row(idx).transpose() / d0;  // d_beta[0] is zero
          VectorXd gs = (g.d_sigma[h].row(idx) / d0 -
                         irf.theta[h](k, m) / (d0 * d0) * g.d_sigma[0].row(idx0))
                            .transpose();
          double v = gb.dot(coeff_block * gb) + gs.dot(cov.sigma_cov * gs);
          se(k, m) = std::sqrt(std::max(0.0, v));
        }
      }
    }
    MatrixXd point = irf.theta[h];
    if (normalize) {
      point = point * impact_diag.cwiseInverse().asDiagonal();
      theta_norm[h] = point;
    }
    irf.lower[h] = point - scale * se;
    irf.upper[h] = point + scale * se;
  }
  if (normalize) irf.theta = theta_norm;
  return irf;
}

std::vector<MatrixXd> inverse_irf_mapping(const std::vector<MatrixXd>& phi) {
  const int H = static_cast<int>(phi.size());
  if (H < 1) throw input_error("inverse_irf_mapping: need at least Phi_1");
  const int K = static_cast<int>(phi[0].rows());
  for (const auto& m : phi)
    if (m.rows() != K || m.cols() != K)
      throw input_error("inverse_irf_mapping: inconsistent dimensions");

  // Companion-style matrix with first block row (-Phi_1, ..., -Phi_H).
  MatrixXd minus = MatrixXd::Zero(K * H, K * H);
  for (int j = 0; j < H; ++j) minus.block(0, j * K, K, K) = -phi[j];
  if (H > 1) minus.block(K, 0, K * (H - 1), K * (H - 1)).setIdentity();

  MatrixXd power = MatrixXd::Identity(K * H, K * H);
  for (int i = 0; i < H; ++i) power = minus * power;

  // First K columns of the H-th power stack -A_H, ..., -A_1 top to bottom.
  std::vector<MatrixXd> a(H);
  for (int i = 1; i <= H; ++i) a[i - 1] = -power.block((H - i) * K, 0, K, K);
  return a;
}

}  // namespace ridgevar
