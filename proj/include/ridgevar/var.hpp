#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "ridgevar/errors.hpp"

namespace ridgevar {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// A K-dimensional VAR(p): y_t = nu + A_1 y_{t-1} + ... + A_p y_{t-p} + u_t,
// with innovation covariance sigma_u.
struct VarModel {
  VectorXd nu;              // K intercept
  std::vector<MatrixXd> A;  // A_1..A_p, each K x K
  MatrixXd sigma_u;         // K x K, symmetric positive definite

  int K() const { return static_cast<int>(nu.size()); }
  int p() const { return static_cast<int>(A.size()); }

  // Checks dimensions and that sigma_u is symmetric positive definite
  // (smallest eigenvalue > 1e-10 relative to the largest).
  void validate() const;
};

// Stacked regression sample: Y = B Z + U with Y K x T and Z holding the p
// lagged observations per column (newest lag first), plus an optional
// trailing row of ones when an intercept is fit.
struct RegressionData {
  MatrixXd Y;  // K x T
  MatrixXd Z;  // (K*p + intercept) x T
  int p = 0;
  bool includes_intercept = false;

  int K() const { return static_cast<int>(Y.rows()); }
  int T() const { return static_cast<int>(Y.cols()); }
  int n_regressors() const { return K() * p + (includes_intercept ? 1 : 0); }
};

// Companion form of the lag polynomial: top block row [A_1 ... A_p], identity
// blocks on the first subdiagonal, zeros elsewhere.
struct CompanionMatrix {
  MatrixXd matrix;  // Kp x Kp
  int K = 0;
  int p = 0;
};

// Builds Y and Z from a K x N series (columns are time). T = N - p; column t
// of Z stacks (y_{t-1}', ..., y_{t-p}')'; a ones row is appended when
// intercept is requested.
RegressionData build_regression(const MatrixXd& series, int p, bool intercept);

struct SimulateOptions {
  int burn_in = 200;
  // Scalar i.i.d. unit-variance draw used for each innovation component;
  // u_t = chol_lower(sigma_u) * z_t. Defaults to standard normal. Swapping
  // the generator changes nothing in the estimation code paths.
  std::function<double(std::mt19937_64&)> draw;
};

// Simulates T observations after discarding burn_in draws, starting from a
// zero initial state. Deterministic for a fixed seed. Rejects models whose
// computed spectral radius reaches 1 (explosive in finite precision);
// borderline-persistent models below that limit are admitted. Returns K x T.
MatrixXd simulate(const VarModel& model, int T, std::uint64_t seed,
                  const SimulateOptions& opts = {});

CompanionMatrix companion(const VarModel& model);
CompanionMatrix companion(const std::vector<MatrixXd>& A);

// Modulus of the largest companion eigenvalue; the model is stable iff the
// result is < 1 - 1e-10.
double spectral_radius(const CompanionMatrix& comp);
double spectral_radius(const VarModel& model);

// Stability declaration with a numeric margin: radius < 1 - 1e-10. Stricter
// than the simulate gate (radius < 1), which must admit borderline models
// whose computed radius sits within rounding of 1.
bool is_stable(const VarModel& model);

// Sample autocovariance of the stacked regressor: ZZ'/T over the lag rows
// (intercept row excluded). Kp x Kp, symmetric PSD.
MatrixXd sample_autocov(const RegressionData& data);

// Max over j of |w_j(gamma_hat) - w_j(gamma)| with eigenvalues of both
// symmetric inputs sorted descending; quantifies spectrum convergence.
double eigenvalue_continuity_check(const MatrixXd& gamma_hat,
                                   const MatrixXd& gamma);

}  // namespace ridgevar
