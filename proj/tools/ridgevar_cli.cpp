// Batch front end: simulate / fit / irf / tune / mc / rerun subcommands over
// the estimation library. Every run writes a manifest.json with the fully
// resolved options; `rerun --manifest` reproduces a run bit-identically.
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ridgevar/inference.hpp"
#include "ridgevar/io.hpp"
#include "ridgevar/linalg.hpp"
#include "ridgevar/irf.hpp"
#include "ridgevar/montecarlo.hpp"

namespace rv = ridgevar;
using nlohmann::json;

namespace {

struct CliOptions {
  std::string command;
  std::string model_path, data_path, scenario_path, lambda_file;
  std::string output_dir = ".";
  std::uint64_t seed = 1;
  int jobs = 1;
  int T = 200;
  std::string method = "ls";
  int p = 1;
  bool no_intercept = false;
  double lambda = -1.0;  // isotropic penalty when >= 0
  bool tune = false;
  std::string scheme;  // cv scheme; tune command requires it explicitly
  int folds = 5;
  double os_split = 0.8;
  int gap = -1;
  bool weights = false;
  int r = 0;  // free lag penalties; 0 means one per lag
  double upper_bound = 0.0;
  bool extrapolate_tail = false;
  int max_evals = 500;
  int H = -1;
  double level = 0.9;
  bool normalize = false;
  bool no_bands = false;
  int split_lag = 1;
  double theta = 0.5;
  double xi = 1.0;
  int q = 0;
  std::string grid;  // comma-separated minnesota tightness candidates
};

json options_to_json(const CliOptions& o) {
  json j;
  j["command"] = o.command;
  j["model"] = o.model_path;
  j["data"] = o.data_path;
  j["scenario"] = o.scenario_path;
  j["lambda_file"] = o.lambda_file;
  j["output_dir"] = o.output_dir;
  j["seed"] = o.seed;
  j["jobs"] = o.jobs;
  j["T"] = o.T;
  j["method"] = o.method;
  j["p"] = o.p;
  j["no_intercept"] = o.no_intercept;
  j["lambda"] = o.lambda;
  j["tune"] = o.tune;
  j["scheme"] = o.scheme;
  j["folds"] = o.folds;
  j["os_split"] = o.os_split;
  j["gap"] = o.gap;
  j["weights"] = o.weights;
  j["r"] = o.r;
  j["upper_bound"] = o.upper_bound;
  j["extrapolate_tail"] = o.extrapolate_tail;
  j["max_evals"] = o.max_evals;
  j["H"] = o.H;
  j["level"] = o.level;
  j["normalize"] = o.normalize;
  j["no_bands"] = o.no_bands;
  j["split_lag"] = o.split_lag;
  j["theta"] = o.theta;
  j["xi"] = o.xi;
  j["q"] = o.q;
  j["grid"] = o.grid;
  return j;
}

CliOptions options_from_json(const json& j) {
  CliOptions o;
  o.command = j.at("command").get<std::string>();
  o.model_path = j.value("model", "");
  o.data_path = j.value("data", "");
  o.scenario_path = j.value("scenario", "");
  o.lambda_file = j.value("lambda_file", "");
  o.output_dir = j.value("output_dir", ".");
  o.seed = j.value("seed", std::uint64_t{1});
  o.jobs = j.value("jobs", 1);
  o.T = j.value("T", 200);
  o.method = j.value("method", "ls");
  o.p = j.value("p", 1);
  o.no_intercept = j.value("no_intercept", false);
  o.lambda = j.value("lambda", -1.0);
  o.tune = j.value("tune", false);
  o.scheme = j.value("scheme", "");
  o.folds = j.value("folds", 5);
  o.os_split = j.value("os_split", 0.8);
  o.gap = j.value("gap", -1);
  o.weights = j.value("weights", false);
  o.r = j.value("r", 0);
  o.upper_bound = j.value("upper_bound", 0.0);
  o.extrapolate_tail = j.value("extrapolate_tail", false);
  o.max_evals = j.value("max_evals", 500);
  o.H = j.value("H", -1);
  o.level = j.value("level", 0.9);
  o.normalize = j.value("normalize", false);
  o.no_bands = j.value("no_bands", false);
  o.split_lag = j.value("split_lag", 1);
  o.theta = j.value("theta", 0.5);
  o.xi = j.value("xi", 1.0);
  o.q = j.value("q", 0);
  o.grid = j.value("grid", "");
  return o;
}

void write_manifest(const CliOptions& o) {
  std::filesystem::create_directories(o.output_dir);
  rv::write_text_file(o.output_dir + "/manifest.json",
                      options_to_json(o).dump(2) + "\n");
}

rv::CvPlan plan_from(const CliOptions& o, const std::string& default_scheme) {
  rv::CvPlan plan;
  std::string s = o.scheme.empty() ? default_scheme : o.scheme;
  if (s == "out_of_sample")
    plan.scheme = rv::CvPlan::Scheme::out_of_sample;
  else if (s == "block_cv")
    plan.scheme = rv::CvPlan::Scheme::block_cv;
  else if (s == "block_nondep_cv")
    plan.scheme = rv::CvPlan::Scheme::block_nondep_cv;
  else
    throw rv::input_error("unknown cv scheme: " + s);
  plan.folds = o.folds;
  plan.os_split = o.os_split;
  plan.gap = o.gap;
  plan.inverse_variance_weights = o.weights;
  return plan;
}

rv::VectorXd parse_grid(const std::string& grid) {
  rv::VectorXd out;
  std::vector<double> vals;
  std::string cur;
  for (char c : grid + ",") {
    if (c == ',') {
      if (!cur.empty()) vals.push_back(std::stod(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.resize(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) out(i) = vals[i];
  return out;
}

// Resolves the ridge-family penalty: explicit lambda file (one lag penalty
// per column), isotropic --lambda, or cross-validated selection via --tune.
rv::PenaltyMatrix resolve_penalty(const CliOptions& o,
                                  const rv::RegressionData& data,
                                  rv::SelectionResult* selected) {
  if (o.tune) {
    rv::PenaltySearchSpace space;
    space.r = o.r > 0 ? o.r : data.p;
    space.upper_bound = o.upper_bound;
    space.extrapolate_tail = o.extrapolate_tail;
    rv::OptimizerConfig cfg;
    cfg.max_evals = o.max_evals;
    cfg.jobs = o.jobs;
    rv::SelectionResult sel =
        rv::select_penalty(data, space, plan_from(o, "block_nondep_cv"), cfg);
    if (selected) *selected = sel;
    return rv::PenaltyMatrix::lag_adapted(sel.lambda, data.K());
  }
  if (!o.lambda_file.empty()) {
    rv::MatrixXd lam = rv::read_csv_matrix(o.lambda_file);
    rv::VectorXd lags(lam.size());
    for (int i = 0; i < lam.size(); ++i)
      lags(i) = lam(i / lam.cols(), i % lam.cols());
    if (static_cast<int>(lags.size()) != data.p)
      throw rv::input_error("lambda file must hold one penalty per lag");
    return rv::PenaltyMatrix::lag_adapted(lags, data.K());
  }
  if (o.lambda >= 0)
    return rv::PenaltyMatrix::isotropic(o.lambda, data.K(), data.p);
  throw rv::input_error(o.method + " requires --lambda, --lambda-file, or --tune");
}

std::string lp_to_json(const rv::LpResult& lp, int H) {
  json j;
  j["method"] = "lp";
  j["q"] = lp.q;
  j["H"] = H;
  j["sigma_hat"] = json::array();
  for (int r = 0; r < lp.sigma_hat.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < lp.sigma_hat.cols(); ++c) row.push_back(lp.sigma_hat(r, c));
    j["sigma_hat"].push_back(row);
  }
  j["phi"] = json::array();
  for (const auto& m : lp.phi) {
    json mat = json::array();
    for (int r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      mat.push_back(row);
    }
    j["phi"].push_back(mat);
  }
  j["T_h"] = lp.T_h;
  return j.dump(2) + "\n";
}

rv::VectorXd rlp_center(const rv::MatrixXd& series, int p, int q) {
  rv::LpResult lp = rv::lp_fit(series, p, q);
  std::vector<rv::MatrixXd> phi(lp.phi.begin() + 1, lp.phi.end());
  std::vector<rv::MatrixXd> A = rv::inverse_irf_mapping(phi);
  const int K = static_cast<int>(series.rows());
  rv::MatrixXd B0(K, K * p);
  for (int j = 0; j < p; ++j) B0.middleCols(j * K, K) = A[j];
  return rv::vec(B0);
}

// Fits the configured method; fills `selected` when tuning ran and `cov`
// for band-capable methods.
rv::FitResult fit_method(const CliOptions& o, const rv::MatrixXd& series,
                         const rv::RegressionData& data,
                         rv::SelectionResult* selected,
                         std::optional<rv::AsymptoticCovariance>* cov) {
  const int K = data.K(), p = data.p;
  if (cov) cov->reset();
  if (o.method == "ls") {
    rv::FitResult fit = rv::ls_fit(data);
    if (cov) *cov = rv::standard_cov(fit);
    return fit;
  }
  if (o.method == "ridge") {
    rv::FitResult fit = rv::rls_fit(data, resolve_penalty(o, data, selected));
    if (cov) *cov = rv::standard_cov(fit);
    return fit;
  }
  if (o.method == "ridge-gls") {
    rv::PenaltyMatrix pen = resolve_penalty(o, data, selected);
    return rv::rls_gls_fit(data, pen, rv::ls_fit(data).sigma_hat);
  }
  if (o.method == "ridge-as") {
    if (o.split_lag < 1 || o.split_lag >= p)
      throw rv::input_error("ridge-as needs --split-lag in [1, p)");
    double lam;
    if (o.tune) {
      rv::PenaltyBuilder builder = [&](const rv::VectorXd& free) {
        rv::VectorXd lags = rv::VectorXd::Zero(p);
        lags.tail(p - o.split_lag).setConstant(free(0));
        return rv::PenaltyMatrix::lag_adapted(lags, K);
      };
      rv::PenaltySearchSpace space;
      space.upper_bound = o.upper_bound;
      rv::OptimizerConfig cfg;
      cfg.max_evals = o.max_evals;
      cfg.jobs = o.jobs;
      rv::SelectionResult sel = rv::select_penalty_custom(
          data, 1, space.resolved_upper(data.T()), builder,
          plan_from(o, "block_nondep_cv"), cfg);
      if (selected) *selected = sel;
      lam = sel.free_lambda(0);
    } else if (o.lambda >= 0) {
      lam = o.lambda;
    } else {
      throw rv::input_error("ridge-as requires --lambda or --tune");
    }
    rv::VectorXd lags = rv::VectorXd::Zero(p);
    lags.tail(p - o.split_lag).setConstant(lam);
    rv::FitResult fit = rv::rls_fit(data, rv::PenaltyMatrix::lag_adapted(lags, K));
    if (cov) {
      if (lam > 0) {
        rv::PartitionedPenalty part =
            rv::PartitionedPenalty::two_level(0.0, lam, o.split_lag, K, p);
        rv::VectorXd lbar2 = rv::VectorXd::Constant(K * (p - o.split_lag),
                                                    lam / double(fit.T));
        *cov = rv::shrinkage_adjusted_cov(fit, part, lbar2);
      } else {
        *cov = rv::standard_cov(fit);
      }
    }
    return fit;
  }
  if (o.method == "minnesota") {
    double lam = o.lambda;
    if (o.tune) {
      rv::VectorXd grid = o.grid.empty() ? parse_grid("0.05,0.1,0.2,0.5,1,2,5")
                                         : parse_grid(o.grid);
      rv::TightnessResult t = rv::minnesota_tightness_cv(
          data, o.theta, grid, plan_from(o, "block_nondep_cv"), o.jobs);
      lam = t.lambda;
    } else if (lam <= 0) {
      throw rv::input_error("minnesota requires --lambda > 0 or --tune");
    }
    return rv::minnesota_posterior_mean(data, rv::ls_fit(data).sigma_hat, lam,
                                        o.theta);
  }
  if (o.method == "hierarchical-mean") {
    rv::MatrixXd omega = rv::MatrixXd::Identity(K * p, K * p);
    return rv::hierarchical_posterior_mean(data, omega, o.xi,
                                           rv::MatrixXd::Zero(K, K * p));
  }
  if (o.method == "rlp") {
    if (o.H < 0) throw rv::input_error("rlp requires --H (projection horizon)");
    if (o.H < p) throw rv::input_error("rlp requires --H >= p");
    rv::VectorXd center = rlp_center(series, p, o.q > 0 ? o.q : p);
    rv::FitResult fit =
        rv::rlp_fit(data, resolve_penalty(o, data, selected), center);
    if (cov) *cov = rv::standard_cov(fit);
    return fit;
  }
  throw rv::input_error("unknown method: " + o.method);
}

int cmd_simulate(const CliOptions& o) {
  rv::VarModel model = rv::model_from_toml(rv::TomlDoc::parse_file(o.model_path));
  rv::MatrixXd series = rv::simulate(model, o.T, o.seed);
  std::filesystem::create_directories(o.output_dir);
  rv::write_series_csv(o.output_dir + "/series.csv", series);
  write_manifest(o);
  std::cout << "wrote " << o.output_dir << "/series.csv\n";
  return 0;
}

int cmd_fit(const CliOptions& o) {
  rv::MatrixXd series = rv::read_series_csv(o.data_path);
  std::filesystem::create_directories(o.output_dir);
  if (o.method == "lp") {
    if (o.H < 0) throw rv::input_error("lp requires --H (projection horizon)");
    rv::LpResult lp =
        rv::lp_fit(series, o.H, o.q > 0 ? o.q : o.p);
    rv::write_text_file(o.output_dir + "/fit.json", lp_to_json(lp, o.H));
  } else {
    rv::RegressionData data = rv::build_regression(series, o.p, !o.no_intercept);
    rv::SelectionResult sel;
    rv::FitResult fit = fit_method(o, series, data, &sel, nullptr);
    rv::write_text_file(o.output_dir + "/fit.json", rv::fit_to_json(fit));
    if (o.tune && sel.evaluations > 0)
      rv::write_csv_matrix(o.output_dir + "/lambda.csv", sel.lambda.transpose());
  }
  write_manifest(o);
  std::cout << "wrote " << o.output_dir << "/fit.json\n";
  return 0;
}

int cmd_irf(const CliOptions& o) {
  if (o.H < 0) throw rv::input_error("irf requires --H");
  rv::MatrixXd series = rv::read_series_csv(o.data_path);
  std::filesystem::create_directories(o.output_dir);
  rv::IrfResult irf;
  if (o.method == "lp") {
    const int K = static_cast<int>(series.rows());
    rv::LpResult lp = rv::lp_fit(series, o.H, o.q > 0 ? o.q : o.p);
    rv::MatrixXd P = rv::chol_lower(lp.sigma_hat);
    rv::MatrixXd map = rv::kron(P.transpose(), rv::MatrixXd::Identity(K, K));
    const double z = rv::normal_quantile(0.5 * (1.0 + o.level));
    irf.H = o.H;
    irf.level = o.level;
    irf.theta.resize(o.H + 1);
    irf.lower.resize(o.H + 1);
    irf.upper.resize(o.H + 1);
    for (int h = 0; h <= o.H; ++h) {
      irf.theta[h] = lp.phi[h] * P;
      rv::MatrixXd c = map * lp.phi_cov[h] * map.transpose();
      rv::MatrixXd se =
          rv::unvec(rv::VectorXd(c.diagonal().cwiseMax(0.0).cwiseSqrt()), K, K);
      irf.lower[h] = irf.theta[h] - z * se;
      irf.upper[h] = irf.theta[h] + z * se;
    }
  } else {
    rv::RegressionData data = rv::build_regression(series, o.p, !o.no_intercept);
    std::optional<rv::AsymptoticCovariance> cov;
    rv::FitResult fit = fit_method(o, series, data, nullptr, &cov);
    if (cov && !o.no_bands)
      irf = rv::delta_method_bands(fit, *cov, o.H, o.level, o.normalize);
    else
      irf = rv::structural_irf(fit, o.H);
  }
  rv::write_irf_csv(o.output_dir + "/irf.csv", irf);
  write_manifest(o);
  std::cout << "wrote " << o.output_dir << "/irf.csv\n";
  return 0;
}

int cmd_tune(const CliOptions& o) {
  if (o.scheme.empty())
    throw rv::input_error("tune requires --scheme "
                          "(out_of_sample | block_cv | block_nondep_cv)");
  rv::MatrixXd series = rv::read_series_csv(o.data_path);
  rv::RegressionData data = rv::build_regression(series, o.p, !o.no_intercept);
  rv::PenaltySearchSpace space;
  space.r = o.r > 0 ? o.r : data.p;
  space.upper_bound = o.upper_bound;
  space.extrapolate_tail = o.extrapolate_tail;
  rv::OptimizerConfig cfg;
  cfg.max_evals = o.max_evals;
  cfg.jobs = o.jobs;
  rv::SelectionResult sel =
      rv::select_penalty(data, space, plan_from(o, ""), cfg);
  std::filesystem::create_directories(o.output_dir);
  rv::write_csv_matrix(o.output_dir + "/lambda.csv", sel.lambda.transpose());
  rv::write_csv_matrix(o.output_dir + "/trace.csv", sel.trace);
  write_manifest(o);
  std::cout << "selected lambda with cv loss " << sel.loss << "\n";
  return 0;
}

int cmd_mc(const CliOptions& o) {
  rv::McScenario sc =
      rv::scenario_from_toml(rv::TomlDoc::parse_file(o.scenario_path));
  rv::McResult res = rv::run_scenario(sc, o.jobs);
  rv::write_mc_tables(o.output_dir, res);
  rv::write_text_file(o.output_dir + "/scenario_resolved.toml",
                      rv::scenario_to_toml(res.scenario));
  write_manifest(o);
  std::cout << "wrote tables to " << o.output_dir << "\n";
  return 0;
}

int dispatch(const CliOptions& o);

int cmd_rerun(const std::string& manifest_path) {
  json j = json::parse(rv::read_text_file(manifest_path));
  CliOptions o = options_from_json(j);
  if (o.command == "rerun") throw rv::input_error("manifest cannot nest rerun");
  return dispatch(o);
}

int dispatch(const CliOptions& o) {
  if (o.command == "simulate") return cmd_simulate(o);
  if (o.command == "fit") return cmd_fit(o);
  if (o.command == "irf") return cmd_irf(o);
  if (o.command == "tune") return cmd_tune(o);
  if (o.command == "mc") return cmd_mc(o);
  throw rv::input_error("unknown command: " + o.command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ridge-regularized VAR estimation, impulse responses, "
               "penalty tuning, and Monte Carlo tables"};
  app.require_subcommand(1);
  app.fallthrough();  // global --seed/--output-dir/--jobs after subcommands
  CliOptions o;
  std::string manifest_path;

  app.add_option("--seed", o.seed, "RNG seed (all randomness flows from it)");
  app.add_option("--output-dir", o.output_dir, "output directory");
  app.add_option("--jobs", o.jobs, "worker threads for replications/folds");

  auto* sim = app.add_subcommand("simulate", "simulate a VAR model to CSV");
  sim->add_option("--model", o.model_path, "model TOML file")->required();
  sim->add_option("--T", o.T, "series length");

  auto add_fit_flags = [&](CLI::App* c) {
    c->add_option("--data", o.data_path, "series CSV (rows = time)")->required();
    c->add_option("--method", o.method,
                  "ls | ridge | ridge-gls | ridge-as | minnesota | "
                  "hierarchical-mean | lp | rlp");
    c->add_option("--p", o.p, "lag order");
    c->add_flag("--no-intercept", o.no_intercept, "drop the intercept");
    c->add_option("--lambda", o.lambda, "isotropic penalty (or tail/tightness)");
    c->add_option("--lambda-file", o.lambda_file, "CSV with one penalty per lag");
    c->add_flag("--tune", o.tune, "select the penalty by cross-validation");
    c->add_option("--scheme", o.scheme, "cv scheme");
    c->add_option("--folds", o.folds, "cv folds");
    c->add_option("--os-split", o.os_split, "training fraction, out_of_sample");
    c->add_option("--gap", o.gap, "boundary gap, block_nondep_cv (-1 = p)");
    c->add_flag("--weights", o.weights, "inverse-variance equation weights");
    c->add_option("--r", o.r, "free lag penalties (0 = one per lag)");
    c->add_option("--upper-bound", o.upper_bound, "search box bound (0 = 100T)");
    c->add_flag("--extrapolate-tail", o.extrapolate_tail,
                "repeat the last free penalty for deeper lags");
    c->add_option("--max-evals", o.max_evals, "optimizer evaluation budget");
    c->add_option("--H", o.H, "horizon (irf / lp / rlp)");
    c->add_option("--split-lag", o.split_lag, "ridge-as free-lag cutoff");
    c->add_option("--theta", o.theta, "minnesota cross-equation shrinkage");
    c->add_option("--grid", o.grid, "minnesota tightness candidates (comma)");
    c->add_option("--xi", o.xi, "hierarchical prior scale");
    c->add_option("--q", o.q, "projection regressor lags (0 = p)");
  };

  auto* fit = app.add_subcommand("fit", "estimate coefficients to JSON");
  add_fit_flags(fit);

  auto* irf = app.add_subcommand("irf", "impulse responses with bands to CSV");
  add_fit_flags(irf);
  irf->add_option("--level", o.level, "nominal band coverage");
  irf->add_flag("--normalize", o.normalize, "unit impact shocks");
  irf->add_flag("--no-bands", o.no_bands, "point responses only");

  auto* tune = app.add_subcommand("tune", "cross-validated penalty selection");
  tune->add_option("--data", o.data_path, "series CSV")->required();
  tune->add_option("--p", o.p, "lag order");
  tune->add_flag("--no-intercept", o.no_intercept, "drop the intercept");
  tune->add_option("--scheme", o.scheme, "cv scheme (required)");
  tune->add_option("--folds", o.folds, "cv folds");
  tune->add_option("--os-split", o.os_split, "training fraction");
  tune->add_option("--gap", o.gap, "boundary gap (-1 = p)");
  tune->add_flag("--weights", o.weights, "inverse-variance equation weights");
  tune->add_option("--r", o.r, "free lag penalties (0 = one per lag)");
  tune->add_option("--upper-bound", o.upper_bound, "search box bound");
  tune->add_flag("--extrapolate-tail", o.extrapolate_tail,
                 "repeat last free penalty for deeper lags");
  tune->add_option("--max-evals", o.max_evals, "optimizer budget");

  auto* mc = app.add_subcommand("mc", "Monte Carlo tables from a scenario");
  mc->add_option("--scenario", o.scenario_path, "scenario TOML")->required();

  auto* rerun = app.add_subcommand("rerun", "re-execute a manifest");
  rerun->add_option("--manifest", manifest_path, "manifest.json path")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (rerun->parsed()) return cmd_rerun(manifest_path);
    o.command = app.get_subcommands().front()->get_name();
    return dispatch(o);
  } catch (const rv::input_error& e) {
    std::cerr << "input_error: " << e.what() << "\n";
    return 2;
  } catch (const rv::numeric_error& e) {
    std::cerr << "numeric_error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
