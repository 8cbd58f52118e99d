#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "ridgevar/estimators.hpp"

namespace ridgevar {

// Validation plan over the T sample columns. Folds are contiguous time
// blocks; the non-dependent scheme additionally drops `gap` columns on both
// sides of each held-out block from training so no training regressor
// overlaps held-out regressands (and vice versa).
struct CvPlan {
  enum class Scheme { out_of_sample, block_cv, block_nondep_cv };

  Scheme scheme = Scheme::block_cv;
  int folds = 5;
  double os_split = 0.8;  // training fraction for out_of_sample / folds=1
  int gap = -1;           // boundary gap for block_nondep_cv; -1 means p
  bool inverse_variance_weights = false;  // weight equations by 1/sigma_kk
};

// Fold layout: held[i] = [start, end) held-out column range, train[i] = the
// training column indices. Exposed so tests can assert the partition
// invariants directly.
struct FoldPlan {
  std::vector<std::pair<int, int>> held;
  std::vector<std::vector<int>> train;
};
FoldPlan make_folds(int T, const CvPlan& plan, int p);

// Search box for the lag-adapted penalty family: r free lambdas on
// [0, upper_bound]^r (upper bound T*100 by default); with extrapolate_tail
// the last free lambda is repeated for lags r+1..p.
struct PenaltySearchSpace {
  int r = 0;
  double upper_bound = 0.0;  // <= 0 means T * 100
  bool extrapolate_tail = false;

  double resolved_upper(int T) const {
    return upper_bound > 0 ? upper_bound : 100.0 * T;
  }
};

using PenaltyBuilder = std::function<PenaltyMatrix(const VectorXd&)>;

// Mean over folds of the mean squared one-step-ahead prediction error of the
// ridge fit (built from `lambdas` via `builder`) on held-out columns, summed
// across equations. A numerically singular penalized system yields +infinity
// rather than an exception, keeping optimizers inside feasible territory.
double cv_loss(const RegressionData& data, const PenaltyBuilder& builder,
               const VectorXd& lambdas, const CvPlan& plan, int jobs = 1);

// Derivative-free pattern search: coordinate-aligned polling, mesh doubled
// on success and halved on failure, initial mesh = upper_bound/16, stopping
// at mesh < 1e-3*upper_bound or eval budget. Deterministic.
struct OptimizerConfig {
  int max_evals = 500;
  double mesh_tolerance = 1e-3;  // relative to upper_bound
  double initial_mesh = 1.0 / 16.0;
  std::uint64_t seed = 0;  // reserved; the search itself is deterministic
  int jobs = 1;
};

struct SelectionResult {
  VectorXd lambda;  // full p-length lag penalties (tail repeated if requested)
  VectorXd free_lambda;  // the r searched coordinates
  double loss = 0.0;
  int evaluations = 0;
  MatrixXd trace;  // one row per evaluation: lambda_1..lambda_r, loss
};

// Minimizes cv_loss over the lag-adapted family on the search box. The
// returned point is the incumbent over every evaluation, which always
// includes the origin, so loss(selected) <= loss(0).
SelectionResult select_penalty(const RegressionData& data,
                               const PenaltySearchSpace& space,
                               const CvPlan& plan,
                               const OptimizerConfig& config = {});

// Same search over r free coordinates in [0, upper]^r with an arbitrary
// penalty builder (e.g. tail-only shrinkage); lambda in the result equals
// free_lambda, interpretation left to the builder.
SelectionResult select_penalty_custom(const RegressionData& data, int r,
                                      double upper,
                                      const PenaltyBuilder& builder,
                                      const CvPlan& plan,
                                      const OptimizerConfig& config = {});

// Cross-validated Minnesota prior tightness on a candidate grid. Each fold
// solve appends the prior as dummy observations (per-equation columns added
// to Y and Z) and runs plain LS; sigma is the diagonal residual-variance
// estimate of a preliminary full-sample LS fit.
struct TightnessResult {
  double lambda = 0.0;
  double loss = 0.0;
  MatrixXd trace;  // one row per candidate: lambda, loss
};
TightnessResult minnesota_tightness_cv(const RegressionData& data, double theta,
                                       const VectorXd& grid, const CvPlan& plan,
                                       int jobs = 1);

}  // namespace ridgevar
