#include "ridgevar/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ridgevar/linalg.hpp"
#include "ridgevar/parallel.hpp"

namespace ridgevar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RegressionData subset_columns(const RegressionData& data,
                              const std::vector<int>& cols) {
  RegressionData sub;
  sub.p = data.p;
  sub.includes_intercept = data.includes_intercept;
  sub.Y.resize(data.Y.rows(), cols.size());
  sub.Z.resize(data.Z.rows(), cols.size());
  for (size_t i = 0; i < cols.size(); ++i) {
    sub.Y.col(i) = data.Y.col(cols[i]);
    sub.Z.col(i) = data.Z.col(cols[i]);
  }
  return sub;
}

// Squared one-step-ahead prediction error of coefficient matrix `coef` on the
// held-out columns, averaged over columns and summed (optionally weighted)
// across equations.
double held_out_mse(const RegressionData& data, const MatrixXd& coef,
                    std::pair<int, int> held, const VectorXd& weights) {
  const int n = held.second - held.first;
  const auto y = data.Y.middleCols(held.first, n);
  const auto z = data.Z.middleCols(held.first, n);
  MatrixXd err = y - coef * z;
  return (weights.transpose() * err.array().square().matrix()).sum() / double(n);
}

VectorXd equation_weights(const RegressionData& data, const CvPlan& plan) {
  if (!plan.inverse_variance_weights) return VectorXd::Ones(data.K());
  VectorXd s = ls_fit(data).sigma_hat.diagonal();
  if ((s.array() <= 0).any())
    throw numeric_error("cv_loss: degenerate residual variance for weighting");
  return s.cwiseInverse();
}

}  // namespace

FoldPlan make_folds(int T, const CvPlan& plan, int p) {
  if (T < 2) throw input_error("make_folds: sample too small");
  if (plan.folds < 1) throw input_error("make_folds: folds must be >= 1");
  if (!(plan.os_split > 0.0 && plan.os_split < 1.0))
    throw input_error("make_folds: os_split outside (0,1)");
  const int gap = plan.gap >= 0 ? plan.gap : p;

  FoldPlan fp;
  const bool single = plan.scheme == CvPlan::Scheme::out_of_sample ||
                      plan.folds == 1;
  if (single) {
    int t0 = static_cast<int>(std::floor(plan.os_split * T));
    if (t0 < 1 || t0 >= T)
      throw input_error("make_folds: degenerate out-of-sample split");
    fp.held.emplace_back(t0, T);
    std::vector<int> train;
    const int train_end =
        plan.scheme == CvPlan::Scheme::block_nondep_cv ? t0 - gap : t0;
    for (int t = 0; t < train_end; ++t) train.push_back(t);
    fp.train.push_back(std::move(train));
    return fp;
  }

  if (plan.folds > T) throw input_error("make_folds: more folds than columns");
  for (int i = 0; i < plan.folds; ++i) {
    const int s = static_cast<int>((static_cast<long>(i) * T) / plan.folds);
    const int e = static_cast<int>((static_cast<long>(i + 1) * T) / plan.folds);
    fp.held.emplace_back(s, e);
    std::vector<int> train;
    for (int t = 0; t < T; ++t) {
      if (t >= s && t < e) continue;
      if (plan.scheme == CvPlan::Scheme::block_nondep_cv &&
          t >= s - gap && t < e + gap)
        continue;
      train.push_back(t);
    }
    fp.train.push_back(std::move(train));
  }
  return fp;
}

double cv_loss(const RegressionData& data, const PenaltyBuilder& builder,
               const VectorXd& lambdas, const CvPlan& plan, int jobs) {
  const PenaltyMatrix penalty = builder(lambdas);
  penalty.validate(data.K(), data.p);
  FoldPlan fp = make_folds(data.T(), plan, data.p);
  const int n_reg = data.n_regressors();
  for (const auto& train : fp.train)
    if (static_cast<int>(train.size()) <= n_reg)
      throw input_error("cv_loss: training fold smaller than regressor count");
  const VectorXd weights = equation_weights(data, plan);

  std::vector<double> fold_loss(fp.held.size(), 0.0);
  parallel_for(static_cast<int>(fp.held.size()), jobs, [&](int i) {
    RegressionData train = subset_columns(data, fp.train[i]);
    try {
      FitResult fit = rls_fit(train, penalty);
      MatrixXd coef(data.K(), n_reg);
      coef.leftCols(data.K() * data.p) = fit.B_hat;
      if (data.includes_intercept) coef.col(data.K() * data.p) = *fit.nu_hat;
      fold_loss[i] = held_out_mse(data, coef, fp.held[i], weights);
    } catch (const numeric_error&) {
      fold_loss[i] = kInf;  // infeasible penalty: keep the optimizer away
    }
  });
  double total = 0.0;
  for (double l : fold_loss) total += l;
  return total / double(fold_loss.size());
}

SelectionResult select_penalty_custom(const RegressionData& data, int r,
                                      double upper,
                                      const PenaltyBuilder& builder,
                                      const CvPlan& plan,
                                      const OptimizerConfig& config) {
  if (r < 1) throw input_error("select_penalty: r must be >= 1");
  if (!(upper > 0)) throw input_error("select_penalty: upper bound must be > 0");
  if (config.max_evals < 1)
    throw input_error("select_penalty: max_evals must be >= 1");
  const double ub = upper;

  std::vector<VectorXd> trace_x;
  std::vector<double> trace_loss;
  int evals = 0;
  auto evaluate = [&](const VectorXd& x) {
    double loss = cv_loss(data, builder, x, plan, config.jobs);
    trace_x.push_back(x);
    trace_loss.push_back(loss);
    ++evals;
    return loss;
  };

  VectorXd best_x = VectorXd::Zero(r);
  double best_loss = evaluate(best_x);  // the origin is always evaluated

  // Initial point: box midpoint on the log1p scale.
  VectorXd x = VectorXd::Constant(r, std::sqrt(1.0 + ub) - 1.0);
  double loss = evaluate(x);
  if (loss < best_loss) {
    best_loss = loss;
    best_x = x;
  }

  double mesh = config.initial_mesh * ub;
  VectorXd current = x;
  double current_loss = loss;
  while (mesh >= config.mesh_tolerance * ub && evals < config.max_evals) {
    VectorXd poll_best;
    double poll_best_loss = kInf;
    for (int i = 0; i < r && evals < config.max_evals; ++i) {
      for (double sign : {+1.0, -1.0}) {
        if (evals >= config.max_evals) break;
        VectorXd cand = current;
        cand(i) = std::clamp(cand(i) + sign * mesh, 0.0, ub);
        if (cand(i) == current(i)) continue;  // projection landed in place
        double cl = evaluate(cand);
        if (cl < poll_best_loss) {
          poll_best_loss = cl;
          poll_best = cand;
        }
      }
    }
    if (poll_best_loss < current_loss) {
      current = poll_best;
      current_loss = poll_best_loss;
      mesh = std::min(mesh * 2.0, ub);
    } else {
      mesh *= 0.5;
    }
    if (current_loss < best_loss) {
      best_loss = current_loss;
      best_x = current;
    }
  }

  if (!std::isfinite(best_loss))
    throw numeric_error("select_penalty: no feasible evaluation within budget");

  SelectionResult sel;
  sel.free_lambda = best_x;
  sel.lambda = best_x;
  sel.loss = best_loss;
  sel.evaluations = evals;
  sel.trace.resize(evals, r + 1);
  for (int i = 0; i < evals; ++i) {
    sel.trace.row(i).head(r) = trace_x[i].transpose();
    sel.trace(i, r) = trace_loss[i];
  }
  return sel;
}

SelectionResult select_penalty(const RegressionData& data,
                               const PenaltySearchSpace& space,
                               const CvPlan& plan,
                               const OptimizerConfig& config) {
  const int p = data.p, r = space.r;
  if (r < 1 || r > p)
    throw input_error("select_penalty: r outside [1, p]");
  if (r < p && !space.extrapolate_tail)
    throw input_error("select_penalty: r < p requires extrapolate_tail");

  auto expand = [&](const VectorXd& free) {
    VectorXd full(p);
    full.head(r) = free;
    for (int j = r; j < p; ++j) full(j) = free(r - 1);
    return full;
  };
  PenaltyBuilder builder = [&](const VectorXd& free) {
    return PenaltyMatrix::lag_adapted(expand(free), data.K());
  };
  SelectionResult sel = select_penalty_custom(
      data, r, space.resolved_upper(data.T()), builder, plan, config);
  sel.lambda = expand(sel.free_lambda);
  return sel;
}

TightnessResult minnesota_tightness_cv(const RegressionData& data, double theta,
                                       const VectorXd& grid, const CvPlan& plan,
                                       int jobs) {
  if (grid.size() < 1)
    throw input_error("minnesota_tightness_cv: empty candidate grid");
  if ((grid.array() <= 0).any())
    throw input_error("minnesota_tightness_cv: tightness must be > 0");
  if (!(theta > 0 && theta <= 1))
    throw input_error("minnesota_tightness_cv: theta outside (0, 1]");
  const int K = data.K(), p = data.p, n_reg = data.n_regressors();

  FoldPlan fp = make_folds(data.T(), plan, p);
  for (const auto& train : fp.train)
    if (static_cast<int>(train.size()) <= n_reg)
      throw input_error("minnesota_tightness_cv: training fold too small");
  const VectorXd weights = equation_weights(data, plan);
  const VectorXd sig2 = ls_fit(data).sigma_hat.diagonal();

  // Dummy-observation columns per equation: column (i,k) has
  // sqrt(i^2 sigma_k^2 / lambda^2 * theta^{-[j != k]}) on its own lag row.
  auto dummy_columns = [&](int j, double lambda) {
    MatrixXd d = MatrixXd::Zero(n_reg, K * p);
    for (int i = 1; i <= p; ++i)
      for (int k = 0; k < K; ++k) {
        double prec = double(i) * double(i) * sig2(k) / (lambda * lambda);
        if (j != k) prec /= theta;
        const int row = (i - 1) * K + k;
        d(row, row) = std::sqrt(prec);
      }
    return d;
  };

  TightnessResult out;
  out.loss = kInf;
  out.trace.resize(grid.size(), 2);
  std::vector<double> losses(grid.size(), 0.0);
  parallel_for(static_cast<int>(grid.size()), jobs, [&](int gi) {
    const double lambda = grid(gi);
    double total = 0.0;
    for (size_t f = 0; f < fp.held.size(); ++f) {
      RegressionData train = subset_columns(data, fp.train[f]);
      MatrixXd coef(K, n_reg);
      try {
        for (int j = 0; j < K; ++j) {
          // Plain LS on the prior-augmented sample [Z_train, D_j], [y_j, 0].
          MatrixXd z_aug(n_reg, train.T() + K * p);
          z_aug.leftCols(train.T()) = train.Z;
          z_aug.rightCols(K * p) = dummy_columns(j, lambda);
          VectorXd y_aug = VectorXd::Zero(train.T() + K * p);
          y_aug.head(train.T()) = train.Y.row(j).transpose();
          MatrixXd gram = z_aug * z_aug.transpose();
          coef.row(j) = solve_sym(gram, MatrixXd(z_aug * y_aug),
                                  "minnesota_tightness_cv")
                            .transpose();
        }
        total += held_out_mse(data, coef, fp.held[f], weights);
      } catch (const numeric_error&) {
        total = kInf;
        break;
      }
    }
    losses[gi] = std::isfinite(total) ? total / double(fp.held.size()) : kInf;
  });

  for (int gi = 0; gi < grid.size(); ++gi) {
    out.trace(gi, 0) = grid(gi);
    out.trace(gi, 1) = losses[gi];
    if (losses[gi] < out.loss) {
      out.loss = losses[gi];
      out.lambda = grid(gi);
    }
  }
  if (!std::isfinite(out.loss))
    throw numeric_error("minnesota_tightness_cv: no feasible candidate");
  return out;
}

}  // namespace ridgevar
