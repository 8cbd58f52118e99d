#pragma once

#include <vector>

#include "ridgevar/inference.hpp"

namespace ridgevar {

// Structural impulse responses with optional pointwise confidence bands.
// theta[h](k, m) is the horizon-h response of variable k to the orthogonal
// shock in variable m; reduced_form holds the MA matrices Phi_0..Phi_H.
struct IrfResult {
  int H = 0;
  double level = 0.0;              // nominal coverage; 0 when bands absent
  std::vector<MatrixXd> theta;     // H+1 entries, K x K
  std::vector<MatrixXd> lower;     // empty when bands absent
  std::vector<MatrixXd> upper;
  std::vector<MatrixXd> reduced_form;
  bool normalized = false;         // columns rescaled to unit impact shocks

  bool has_bands() const { return !lower.empty(); }
};

// MA recursion Phi_0 = I, Phi_h = sum_{j=1..min(h,p)} Phi_{h-j} A_j.
std::vector<MatrixXd> ma_coefficients(const std::vector<MatrixXd>& A, int H);
std::vector<MatrixXd> ma_coefficients(const VarModel& model, int H);

// Point responses Theta(h) = Phi_h * chol_lower(sigma_hat); bands absent.
// The optional ordering permutes variables before the Cholesky factorization
// (recursive identification order); responses are reported in the original
// variable order.
IrfResult structural_irf(const FitResult& fit, int H,
                         const std::vector<int>& ordering = {});

// Analytic derivatives of vec(Theta(h)) obtained by differentiating the MA
// recursion (coefficient part) and the Cholesky factorization (covariance
// part): d_beta[h] is K^2 x K^2 p, d_sigma[h] is K^2 x K^2.
struct IrfGradients {
  std::vector<MatrixXd> d_beta;
  std::vector<MatrixXd> d_sigma;
};
IrfGradients irf_gradients(const FitResult& fit, int H);

// Pointwise delta-method bands: per (k, m, h) standard error from
// [G_beta, G_sigma] blockdiag(coeff_cov, sigma_cov) [G_beta, G_sigma]',
// half-width z_{(1+level)/2} * se / sqrt(T). With normalize=true, responses
// are rescaled to unit impact shocks theta_km(h)/theta_mm(0) and the
// gradients carry the exact quotient-rule correction.
IrfResult delta_method_bands(const FitResult& fit,
                             const AsymptoticCovariance& cov, int H,
                             double level, bool normalize = false);

// Reconstructs VAR(H) coefficients from MA matrices Phi_1..Phi_H via powers
// of the inverse-response companion matrix; exact polynomial identity, the
// inverse of ma_coefficients.
std::vector<MatrixXd> inverse_irf_mapping(const std::vector<MatrixXd>& phi);

}  // namespace ridgevar
