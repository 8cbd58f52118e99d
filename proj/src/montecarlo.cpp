#include "ridgevar/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "ridgevar/inference.hpp"
#include "ridgevar/linalg.hpp"
#include "ridgevar/parallel.hpp"

namespace ridgevar {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Per-replication, per-method output kept until the deterministic reduction.
struct RepOutput {
  bool ok = false;
  std::vector<MatrixXd> theta;  // H+1 structural responses
  std::vector<MatrixXd> lower;  // empty when the method has no bands
  std::vector<MatrixXd> upper;
  VectorXd selected;  // selected penalties, empty when the method has none
};

void normalize_columns(std::vector<MatrixXd>& mats, const VectorXd& d0) {
  for (auto& m : mats)
    for (int c = 0; c < m.cols(); ++c) m.col(c) /= d0(c);
}

PenaltySearchSpace resolved_space(const MethodConfig& cfg, int p_fit) {
  PenaltySearchSpace s = cfg.search;
  if (s.r == 0) {
    s.r = p_fit;
    s.extrapolate_tail = false;
  }
  return s;
}

VectorXd default_tightness_grid() {
  VectorXd g(7);
  g << 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0;
  return g;
}

SelectionResult ridge_cv(const RegressionData& data, const MethodConfig& cfg) {
  return select_penalty(data, resolved_space(cfg, data.p), cfg.cv,
                        cfg.optimizer);
}

void attach_bands(RepOutput& out, const FitResult& fit,
                  const AsymptoticCovariance& cov, const McScenario& sc) {
  IrfResult irf = delta_method_bands(fit, cov, sc.H, sc.level, sc.normalize);
  out.theta = irf.theta;
  out.lower = irf.lower;
  out.upper = irf.upper;
}

void attach_point_irf(RepOutput& out, const FitResult& fit,
                      const McScenario& sc) {
  IrfResult irf = structural_irf(fit, sc.H);
  out.theta = irf.theta;
  if (sc.normalize) normalize_columns(out.theta, out.theta[0].diagonal());
}

RepOutput run_lp(const McScenario& sc, const MethodConfig& cfg,
                 const MatrixXd& series) {
  const int K = static_cast<int>(series.rows());
  const int q = cfg.q > 0 ? cfg.q : sc.p_fit;
  LpResult lp = lp_fit(series, sc.H, q);
  MatrixXd P = chol_lower(lp.sigma_hat);
  MatrixXd map = kron(P.transpose(), MatrixXd::Identity(K, K));
  const double z = normal_quantile(0.5 * (1.0 + sc.level));

  RepOutput out;
  out.theta.resize(sc.H + 1);
  out.lower.resize(sc.H + 1);
  out.upper.resize(sc.H + 1);
  for (int h = 0; h <= sc.H; ++h) {
    out.theta[h] = lp.phi[h] * P;
    MatrixXd cov = map * lp.phi_cov[h] * map.transpose();
    MatrixXd se = unvec(VectorXd(cov.diagonal().cwiseMax(0.0).cwiseSqrt()), K, K);
    out.lower[h] = out.theta[h] - z * se;  // phi_cov is finite-sample already
    out.upper[h] = out.theta[h] + z * se;
  }
  if (sc.normalize) {
    VectorXd d0 = out.theta[0].diagonal();
    normalize_columns(out.theta, d0);
    normalize_columns(out.lower, d0);
    normalize_columns(out.upper, d0);
  }
  return out;
}

RepOutput run_method(const McScenario& sc, const MethodConfig& cfg,
                     const MatrixXd& series, const RegressionData& data) {
  const int K = data.K(), p = data.p;
  RepOutput out;

  if (cfg.name == "ls") {
    FitResult fit = ls_fit(data);
    attach_bands(out, fit, standard_cov(fit), sc);
  } else if (cfg.name == "ridge") {
    SelectionResult sel = ridge_cv(data, cfg);
    FitResult fit = rls_fit(data, PenaltyMatrix::lag_adapted(sel.lambda, K));
    attach_bands(out, fit, standard_cov(fit), sc);
    out.selected = sel.lambda;
  } else if (cfg.name == "ridge-gls") {
    SelectionResult sel = ridge_cv(data, cfg);
    MatrixXd sigma = ls_fit(data).sigma_hat;
    FitResult fit =
        rls_gls_fit(data, PenaltyMatrix::lag_adapted(sel.lambda, K), sigma);
    attach_point_irf(out, fit, sc);
    out.selected = sel.lambda;
  } else if (cfg.name == "ridge-as") {
    const int pbar = cfg.split_lag;
    PenaltyBuilder builder = [&](const VectorXd& free) {
      VectorXd lags = VectorXd::Zero(p);
      lags.tail(p - pbar).setConstant(free(0));
      return PenaltyMatrix::lag_adapted(lags, K);
    };
    SelectionResult sel = select_penalty_custom(
        data, 1, cfg.search.resolved_upper(data.T()), builder, cfg.cv,
        cfg.optimizer);
    const double lam = sel.free_lambda(0);
    FitResult fit = rls_fit(data, builder(sel.free_lambda));
    if (lam > 0) {
      PartitionedPenalty part =
          PartitionedPenalty::two_level(0.0, lam, pbar, K, p);
      VectorXd lbar2 =
          VectorXd::Constant(K * (p - pbar), lam / double(fit.T));
      attach_bands(out, fit, shrinkage_adjusted_cov(fit, part, lbar2), sc);
    } else {
      attach_bands(out, fit, standard_cov(fit), sc);
    }
    out.selected = sel.free_lambda;
  } else if (cfg.name == "minnesota") {
    VectorXd grid = cfg.tightness_grid.size() > 0 ? cfg.tightness_grid
                                                  : default_tightness_grid();
    TightnessResult t = minnesota_tightness_cv(data, cfg.theta, grid, cfg.cv);
    MatrixXd sigma = ls_fit(data).sigma_hat;
    FitResult fit = minnesota_posterior_mean(data, sigma, t.lambda, cfg.theta);
    attach_point_irf(out, fit, sc);
    out.selected = VectorXd::Constant(1, t.lambda);
  } else if (cfg.name == "hierarchical-mean") {
    MatrixXd omega = MatrixXd::Identity(K * p, K * p);
    FitResult fit = hierarchical_posterior_mean(data, omega, cfg.xi,
                                                MatrixXd::Zero(K, K * p));
    attach_point_irf(out, fit, sc);
  } else if (cfg.name == "lp") {
    out = run_lp(sc, cfg, series);
  } else if (cfg.name == "rlp") {
    const int q = cfg.q > 0 ? cfg.q : p;
    LpResult lp = lp_fit(series, p, q);
    std::vector<MatrixXd> phi(lp.phi.begin() + 1, lp.phi.end());
    std::vector<MatrixXd> A = inverse_irf_mapping(phi);
    MatrixXd B0(K, K * p);
    for (int j = 0; j < p; ++j) B0.middleCols(j * K, K) = A[j];
    SelectionResult sel = ridge_cv(data, cfg);
    FitResult fit =
        rlp_fit(data, PenaltyMatrix::lag_adapted(sel.lambda, K), vec(B0));
    attach_bands(out, fit, standard_cov(fit), sc);
    out.selected = sel.lambda;
  } else {
    throw input_error("unknown method: " + cfg.name);
  }
  out.ok = true;
  return out;
}

double median_of(std::vector<double>& v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

McScenario resolve(const McScenario& scenario) {
  McScenario sc = scenario;
  sc.dgp.validate();
  if (spectral_radius(sc.dgp) >= 1.0)
    throw input_error("unstable_dgp: scenario model");
  if (sc.B < 1) throw input_error("run_scenario: B must be >= 1");
  if (sc.H < 0) throw input_error("run_scenario: H must be >= 0");
  if (!(sc.level > 0.0 && sc.level < 1.0))
    throw input_error("run_scenario: level outside (0,1)");
  if (sc.p_fit <= 0) sc.p_fit = sc.dgp.p();
  const int K = sc.dgp.K();
  if (sc.T - sc.p_fit <= K * sc.p_fit + 1)
    throw input_error("run_scenario: sample too short for p_fit");
  if (sc.methods.empty()) throw input_error("run_scenario: empty method menu");

  const auto& registry = method_registry();
  std::set<std::string> labels;
  for (auto& m : sc.methods) {
    if (std::find(registry.begin(), registry.end(), m.name) == registry.end())
      throw input_error("unknown method: " + m.name);
    if (m.label.empty()) m.label = m.name;
    if (!labels.insert(m.label).second)
      throw input_error("run_scenario: duplicate method label " + m.label);
    if (m.name == "ridge-as" &&
        (m.split_lag < 1 || m.split_lag >= sc.p_fit))
      throw input_error("run_scenario: ridge-as split lag outside [1, p_fit)");
  }
  if (labels.find(sc.baseline) == labels.end())
    throw input_error("run_scenario: baseline method not in menu");
  return sc;
}

}  // namespace

const std::vector<std::string>& method_registry() {
  static const std::vector<std::string> names = {
      "ls",        "ridge",             "ridge-gls", "ridge-as",
      "minnesota", "hierarchical-mean", "lp",        "rlp"};
  return names;
}

bool method_has_bands(const std::string& name) {
  return name == "ls" || name == "ridge" || name == "ridge-as" ||
         name == "lp" || name == "rlp";
}

int McTable::method_index(const std::string& label) const {
  auto it = std::find(methods.begin(), methods.end(), label);
  if (it == methods.end())
    throw input_error("McTable: no method " + label);
  return static_cast<int>(it - methods.begin());
}

double McTable::cell(int k, int method_index, int h) const {
  auto it = std::find(horizons.begin(), horizons.end(), h);
  if (k < 0 || k >= K || method_index < 0 ||
      method_index >= static_cast<int>(methods.size()) ||
      it == horizons.end())
    throw input_error("McTable: cell index out of range");
  return cells(k * static_cast<int>(methods.size()) + method_index,
               it - horizons.begin());
}

const McTable& McResult::table(const std::string& kind) const {
  for (const auto& t : tables)
    if (t.kind == kind) return t;
  throw input_error("McResult: no table of kind " + kind);
}

McResult run_scenario(const McScenario& scenario, int jobs) {
  const McScenario sc = resolve(scenario);
  const int K = sc.dgp.K(), M = static_cast<int>(sc.methods.size());
  const int Hc = sc.H + 1;

  std::vector<MatrixXd> theta_true(Hc);
  {
    auto phi = ma_coefficients(sc.dgp, sc.H);
    MatrixXd P = chol_lower(sc.dgp.sigma_u);
    for (int h = 0; h < Hc; ++h) theta_true[h] = phi[h] * P;
    if (sc.normalize) normalize_columns(theta_true, theta_true[0].diagonal());
  }

  std::vector<std::vector<RepOutput>> store(M);
  for (auto& s : store) s.resize(sc.B);
  parallel_for(sc.B, jobs, [&](int b) {
    MatrixXd series = simulate(sc.dgp, sc.T, sc.seed_base + b);
    RegressionData data = build_regression(series, sc.p_fit, true);
    for (int mi = 0; mi < M; ++mi) {
      try {
        store[mi][b] = run_method(sc, sc.methods[mi], series, data);
      } catch (const numeric_error&) {
        store[mi][b].ok = false;  // excluded for this method only
      }
    }
  });

  McResult res;
  res.scenario = sc;
  res.exclusions.assign(M, 0);
  res.mean_penalty.resize(M);
  for (int mi = 0; mi < M; ++mi) res.method_labels.push_back(sc.methods[mi].label);

  // Per-method MSE cells: sum over shocks, mean over included replications.
  std::vector<MatrixXd> mse(M, MatrixXd::Zero(K, Hc));
  for (int mi = 0; mi < M; ++mi) {
    int n_ok = 0;
    VectorXd lam_sum;
    for (int b = 0; b < sc.B; ++b) {
      const RepOutput& r = store[mi][b];
      if (!r.ok) continue;
      ++n_ok;
      for (int h = 0; h < Hc; ++h)
        for (int k = 0; k < K; ++k)
          mse[mi](k, h) += (r.theta[h].row(k) - theta_true[h].row(k)).squaredNorm();
      if (r.selected.size() > 0) {
        if (lam_sum.size() == 0) lam_sum = VectorXd::Zero(r.selected.size());
        lam_sum += r.selected;
      }
    }
    res.exclusions[mi] = sc.B - n_ok;
    if (n_ok > 0) {
      mse[mi] /= double(n_ok);
      if (lam_sum.size() > 0) res.mean_penalty[mi] = lam_sum / double(n_ok);
    } else {
      mse[mi].setConstant(kNaN);
    }
  }

  std::vector<int> horizons(Hc);
  for (int h = 0; h < Hc; ++h) horizons[h] = h;

  McTable rel;
  rel.kind = "relative_mse";
  rel.methods = res.method_labels;
  rel.horizons = horizons;
  rel.K = K;
  rel.cells.resize(K * M, Hc);
  const int base = static_cast<int>(
      std::find(res.method_labels.begin(), res.method_labels.end(), sc.baseline) -
      res.method_labels.begin());
  for (int k = 0; k < K; ++k)
    for (int mi = 0; mi < M; ++mi)
      for (int h = 0; h < Hc; ++h)
        rel.cells(k * M + mi, h) = mse[mi](k, h) / mse[base](k, h);
  res.tables.push_back(std::move(rel));

  std::vector<int> band_idx;
  for (int mi = 0; mi < M; ++mi)
    if (method_has_bands(sc.methods[mi].name)) band_idx.push_back(mi);
  const int Mb = static_cast<int>(band_idx.size());
  if (Mb > 0) {
    McTable cover, len, len_med;
    for (McTable* t : {&cover, &len, &len_med}) {
      t->horizons = horizons;
      t->K = K;
      for (int mi : band_idx) t->methods.push_back(res.method_labels[mi]);
      t->cells.resize(K * Mb, Hc);
    }
    cover.kind = "coverage";
    len.kind = "length";
    len_med.kind = "length_median";

    for (int bi = 0; bi < Mb; ++bi) {
      const int mi = band_idx[bi];
      for (int k = 0; k < K; ++k)
        for (int h = 0; h < Hc; ++h) {
          double cov_sum = 0.0, len_sum = 0.0;
          std::vector<double> widths;
          int n_ok = 0;
          for (int b = 0; b < sc.B; ++b) {
            const RepOutput& r = store[mi][b];
            if (!r.ok) continue;
            ++n_ok;
            double c = 0.0, w = 0.0;
            for (int m = 0; m < K; ++m) {
              const double t0 = theta_true[h](k, m);
              c += (r.lower[h](k, m) <= t0 && t0 <= r.upper[h](k, m)) ? 1.0 : 0.0;
              w += r.upper[h](k, m) - r.lower[h](k, m);
            }
            cov_sum += c / K;
            const double mean_w = w / K;
            len_sum += mean_w;
            widths.push_back(mean_w);
          }
          const int row = k * Mb + bi;
          cover.cells(row, h) = n_ok > 0 ? cov_sum / n_ok : kNaN;
          len.cells(row, h) = n_ok > 0 ? len_sum / n_ok : kNaN;
          len_med.cells(row, h) = median_of(widths);
        }
    }
    res.tables.push_back(std::move(cover));
    res.tables.push_back(std::move(len));
    res.tables.push_back(std::move(len_med));
  }
  return res;
}

VarModel small_coefficient_dgp(const VarModel& base,
                               const std::vector<int>& tail_lags,
                               double scale) {
  if (scale < 0) throw input_error("small_coefficient_dgp: negative scale");
  VarModel out = base;
  for (int lag : tail_lags) {
    if (lag < 1 || lag > base.p())
      throw input_error("small_coefficient_dgp: tail lag outside 1..p");
    out.A[lag - 1] *= scale;
  }
  out.validate();
  if (spectral_radius(out) >= 1.0)
    throw numeric_error("unstable_dgp: rescaled model");
  return out;
}

std::vector<int> threshold_partition(const FitResult& fit, double threshold) {
  if (threshold < 0)
    throw input_error("threshold_partition: negative threshold");
  std::vector<int> tail;
  auto A = fit.coefficient_matrices();
  for (int i = 1; i <= fit.p; ++i)
    if (A[i - 1].cwiseAbs().maxCoeff() < threshold) tail.push_back(i);
  return tail;
}

VarModel persistent_var5_dgp() {
  const int K = 7, p = 5;
  std::mt19937_64 rng(240107);
  std::normal_distribution<double> gauss(0.0, 1.0);

  VarModel m;
  m.nu = VectorXd::Zero(K);
  m.A.resize(p);
  for (int j = 0; j < p; ++j) {
    m.A[j].resize(K, K);
    for (int r = 0; r < K; ++r)
      for (int c = 0; c < K; ++c)
        m.A[j](r, c) = 0.1 * gauss(rng) / double(j + 1);
  }
  // Scaling lag j by c^j scales every companion eigenvalue by c, so the
  // spectral radius lands exactly on the target.
  const double target = 0.99;
  const double c = target / spectral_radius(companion(m.A));
  for (int j = 0; j < p; ++j) m.A[j] *= std::pow(c, j + 1);

  MatrixXd L = MatrixXd::Zero(K, K);
  for (int r = 0; r < K; ++r) {
    L(r, r) = 1.0 + 0.15 * r;
    for (int c2 = 0; c2 < r; ++c2) L(r, c2) = 0.2 * gauss(rng);
  }
  m.sigma_u = L * L.transpose();
  m.validate();
  return m;
}

}  // namespace ridgevar
