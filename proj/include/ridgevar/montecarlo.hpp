#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ridgevar/irf.hpp"
#include "ridgevar/tuning.hpp"

namespace ridgevar {

// One estimator entry in a scenario's method menu. `name` must come from
// method_registry(); `label` keys table rows and defaults to the name.
// Fields beyond (name, label) apply only to the methods that read them.
struct MethodConfig {
  std::string name;
  std::string label;
  CvPlan cv;                  // penalty selection plan (ridge family, rlp)
  PenaltySearchSpace search;  // r = 0 means one free lambda per fitted lag
  OptimizerConfig optimizer;
  int split_lag = 6;          // ridge-as: last freely estimated lag
  double theta = 0.5;         // minnesota: cross-equation shrinkage
  VectorXd tightness_grid;    // minnesota: candidate lambdas; empty = default
  double xi = 1.0;            // hierarchical-mean: prior scale
  int q = 0;                  // lp / rlp: projection lag order; 0 = p_fit
};

// Registered estimator names: ls, ridge, ridge-gls, ridge-as, minnesota,
// hierarchical-mean, lp, rlp.
const std::vector<std::string>& method_registry();
// Whether the method produces confidence bands (and hence coverage/length
// rows): true for ls, ridge, ridge-as, lp, rlp. Posterior means are
// point-only here (no posterior-quantile intervals).
bool method_has_bands(const std::string& name);

struct McScenario {
  VarModel dgp;
  int T = 200;                // simulated series length
  int B = 100;                // replications
  int p_fit = 0;              // estimator lag order; 0 = DGP order
  int H = 12;                 // maximum IRF horizon
  double level = 0.90;        // nominal band coverage
  bool normalize = false;     // rescale responses to unit impact shocks
  std::uint64_t seed_base = 1;
  std::string baseline = "ls";  // relative-MSE normalizer
  std::vector<MethodConfig> methods;
};

// Cells indexed by (variable k, method, horizon): row k * n_methods + method,
// column = horizon (horizons run 0..H). Coverage/length tables carry only the
// band-producing methods.
struct McTable {
  std::string kind;  // relative_mse | coverage | length | length_median
  std::vector<std::string> methods;
  std::vector<int> horizons;
  int K = 0;
  MatrixXd cells;

  int method_index(const std::string& label) const;
  double cell(int k, int method_index, int h) const;
};

struct McResult {
  McScenario scenario;  // echo with defaults resolved
  std::vector<McTable> tables;
  std::vector<std::string> method_labels;
  std::vector<int> exclusions;         // per method: replications dropped
  std::vector<VectorXd> mean_penalty;  // per method: mean selected penalty
                                       // over included reps; empty when the
                                       // method selects none

  const McTable& table(const std::string& kind) const;
};

// Runs the full replication experiment: per replication b, simulate with
// seed_base + b (shared read-only across methods), fit every method, compute
// structural IRFs and, for band-producing methods, delta-method bands.
// Numeric failures exclude the (replication, method) pair only. Tables are
// reduced in replication order, so results are deterministic given seed_base
// and identical under any jobs count.
McResult run_scenario(const McScenario& scenario, int jobs = 1);

// Copy of `base` with the coefficient blocks of `tail_lags` (1-based)
// multiplied by `scale` (e.g. T^{-(1/2+delta)}); rejects unstable results.
VarModel small_coefficient_dgp(const VarModel& base,
                               const std::vector<int>& tail_lags, double scale);

// Heuristic lag partition for asymptotic shrinkage: returns the (1-based)
// lags whose largest absolute coefficient falls below the threshold. No
// post-selection inference correction is applied downstream.
std::vector<int> threshold_partition(const FitResult& fit, double threshold);

// Built-in highly persistent VAR(5) on 7 variables, spectral radius 0.99;
// a synthetic stand-in for long-memory macro panels.
VarModel persistent_var5_dgp();

}  // namespace ridgevar
