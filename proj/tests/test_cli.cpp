#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "oracles.hpp"
#include "ridgevar/estimators.hpp"
#include "ridgevar/io.hpp"
#include "ridgevar/tuning.hpp"
#include "ridgevar/var.hpp"

using namespace ridgevar;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("ridgevar_cli_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  return std::filesystem::exists(path) ? read_text_file(path) : std::string();
}

RunResult run_cli(const TempDir& tmp, const std::string& args) {
  const std::string out_path = tmp.file("stdout.txt");
  const std::string err_path = tmp.file("stderr.txt");
  const std::string cmd = std::string(RIDGEVAR_CLI_PATH) + " " + args + " > " +
                          out_path + " 2> " + err_path;
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = (rc == -1) ? -1 : WEXITSTATUS(rc);
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

std::string write_model(const TempDir& tmp, const VarModel& m,
                        const std::string& name = "model.toml") {
  const std::string path = tmp.file(name);
  write_text_file(path, model_to_toml(m));
  return path;
}

}  // namespace

TEST_CASE("simulate writes a deterministic series and a manifest") {
  TempDir tmp;
  VarModel m = oracle::damped_var2(0.9);
  const std::string model = write_model(tmp, m);

  auto r1 = run_cli(tmp, "simulate --model " + model +
                             " --T 200 --seed 42 --output-dir " +
                             tmp.file("d1"));
  REQUIRE(r1.exit_code == 0);
  CHECK(contains(r1.out, "series.csv"));

  MatrixXd series = read_series_csv(tmp.file("d1/series.csv"));
  REQUIRE(series.rows() == 2);
  REQUIRE(series.cols() == 200);
  MatrixXd expect = simulate(m, 200, 42);
  CHECK((series - expect).cwiseAbs().maxCoeff() == 0.0);

  auto r2 = run_cli(tmp, "simulate --model " + model +
                             " --T 200 --seed 42 --output-dir " +
                             tmp.file("d2"));
  REQUIRE(r2.exit_code == 0);
  CHECK(read_text_file(tmp.file("d1/series.csv")) ==
        read_text_file(tmp.file("d2/series.csv")));

  auto manifest =
      nlohmann::json::parse(read_text_file(tmp.file("d1/manifest.json")));
  CHECK(manifest["command"] == "simulate");
  CHECK(manifest["T"] == 200);
  CHECK(manifest["seed"] == 42);
}

TEST_CASE("bad inputs exit with code 2 and an input_error prefix") {
  TempDir tmp;

  auto missing = run_cli(tmp, "simulate --model " + tmp.file("nope.toml") +
                                  " --output-dir " + tmp.file("o"));
  CHECK(missing.exit_code == 2);
  CHECK(contains(missing.err, "input_error:"));

  VarModel bad = oracle::damped_var2(0.9);
  bad.A[0] = MatrixXd::Identity(2, 2) * 1.05;
  bad.A[1] = MatrixXd::Zero(2, 2);
  auto unstable = run_cli(tmp, "simulate --model " + write_model(tmp, bad) +
                                   " --output-dir " + tmp.file("o"));
  CHECK(unstable.exit_code == 2);
  CHECK(contains(unstable.err, "input_error:"));
  CHECK(contains(unstable.err, "unstable_dgp"));

  // Library-level data validation surfaces the same way.
  VarModel m = oracle::damped_var2(0.9);
  write_series_csv(tmp.file("short.csv"), simulate(m, 4, 1));
  auto tiny = run_cli(tmp, "fit --data " + tmp.file("short.csv") +
                               " --method ls --p 3 --output-dir " +
                               tmp.file("o"));
  CHECK(tiny.exit_code == 2);
  CHECK(contains(tiny.err, "input_error:"));
}

TEST_CASE("degenerate data exits with code 3 and a numeric_error prefix") {
  TempDir tmp;
  VarModel m = oracle::damped_var2(0.9);
  MatrixXd y = simulate(m, 120, 3);
  MatrixXd dup(2, y.cols());
  dup.row(0) = y.row(0);
  dup.row(1) = y.row(0);  // perfectly collinear equations
  write_series_csv(tmp.file("dup.csv"), dup);

  auto r = run_cli(tmp, "fit --data " + tmp.file("dup.csv") +
                            " --method ls --p 1 --output-dir " + tmp.file("o"));
  CHECK(r.exit_code == 3);
  CHECK(contains(r.err, "numeric_error:"));
}

TEST_CASE("fit ls reproduces the library estimate and tracks the truth") {
  TempDir tmp;
  VarModel m = oracle::damped_var2(0.9);
  MatrixXd y = simulate(m, 600, 7);
  write_series_csv(tmp.file("series.csv"), y);

  auto r = run_cli(tmp, "fit --data " + tmp.file("series.csv") +
                            " --method ls --p 2 --output-dir " +
                            tmp.file("fit"));
  REQUIRE(r.exit_code == 0);

  auto j = nlohmann::json::parse(read_text_file(tmp.file("fit/fit.json")));
  CHECK(j["method"] == "ls");
  CHECK(j["K"] == 2);
  CHECK(j["p"] == 2);

  FitResult fit = ls_fit(build_regression(y, 2, true));
  REQUIRE(j["B_hat"].size() == 2);
  for (int k = 0; k < 2; ++k)
    for (int c = 0; c < 4; ++c)
      CHECK(j["B_hat"][k][c].get<double>() == fit.B_hat(k, c));
  CHECK(j["sigma_hat"][1][0].get<double>() == fit.sigma_hat(1, 0));

  // With T=600 the estimate sits close to the generating coefficients.
  MatrixXd B_true(2, 4);
  B_true << m.A[0], m.A[1];
  double worst = 0.0;
  for (int k = 0; k < 2; ++k)
    for (int c = 0; c < 4; ++c)
      worst = std::max(worst,
                       std::abs(j["B_hat"][k][c].get<double>() - B_true(k, c)));
  CHECK(worst < 0.15);
}

TEST_CASE("tune emits the same selection as the library call") {
  TempDir tmp;
  VarModel m = oracle::damped_var2(0.9);
  MatrixXd y = simulate(m, 240, 11);
  write_series_csv(tmp.file("series.csv"), y);

  auto r = run_cli(tmp, "tune --data " + tmp.file("series.csv") +
                            " --p 2 --scheme block_cv --folds 4 "
                            "--upper-bound 50 --max-evals 60 --output-dir " +
                            tmp.file("tuned"));
  REQUIRE(r.exit_code == 0);
  CHECK(contains(r.out, "selected lambda"));

  RegressionData data = build_regression(read_series_csv(tmp.file("series.csv")), 2, true);
  PenaltySearchSpace space;
  space.r = data.p;
  space.upper_bound = 50.0;
  CvPlan plan;
  plan.scheme = CvPlan::Scheme::block_cv;
  plan.folds = 4;
  OptimizerConfig cfg;
  cfg.max_evals = 60;
  SelectionResult sel = select_penalty(data, space, plan, cfg);

  MatrixXd lambda = read_csv_matrix(tmp.file("tuned/lambda.csv"));
  REQUIRE(lambda.size() == sel.lambda.size());
  CHECK((lambda.transpose().col(0) - sel.lambda).cwiseAbs().maxCoeff() == 0.0);

  MatrixXd trace = read_csv_matrix(tmp.file("tuned/trace.csv"));
  REQUIRE(trace.rows() == sel.trace.rows());
  REQUIRE(trace.cols() == sel.trace.cols());
  CHECK((trace - sel.trace).cwiseAbs().maxCoeff() == 0.0);

  auto no_scheme = run_cli(tmp, "tune --data " + tmp.file("series.csv") +
                                    " --p 2 --output-dir " + tmp.file("t2"));
  CHECK(no_scheme.exit_code == 2);
  CHECK(contains(no_scheme.err, "requires --scheme"));
}

TEST_CASE("tuned ridge fit stores the selected penalty next to the estimate") {
  TempDir tmp;
  VarModel m = oracle::damped_var2(0.9);
  write_series_csv(tmp.file("series.csv"), simulate(m, 240, 11));

  auto r = run_cli(tmp, "fit --data " + tmp.file("series.csv") +
                            " --method ridge --tune --scheme block_cv "
                            "--folds 4 --upper-bound 50 --max-evals 60 "
                            "--p 2 --output-dir " + tmp.file("rf"));
  REQUIRE(r.exit_code == 0);
  REQUIRE(std::filesystem::exists(tmp.file("rf/lambda.csv")));
  auto j = nlohmann::json::parse(read_text_file(tmp.file("rf/fit.json")));
  CHECK(j["method"] == "ridge");
  REQUIRE(j.contains("penalty"));

  // The stored penalty uses the tuned per-lag values.
  MatrixXd lambda = read_csv_matrix(tmp.file("rf/lambda.csv"));
  REQUIRE(j["penalty"]["lag_values"].size() == size_t(lambda.size()));
  for (int i = 0; i < lambda.size(); ++i)
    CHECK(j["penalty"]["lag_values"][i].get<double>() == lambda(0, i));
}

TEST_CASE("rlp refuses to run without a projection horizon") {
  TempDir tmp;
  VarModel m = oracle::damped_var2(0.9);
  write_series_csv(tmp.file("series.csv"), simulate(m, 200, 5));

  auto r = run_cli(tmp, "fit --data " + tmp.file("series.csv") +
                            " --method rlp --p 2 --lambda 1.0 --output-dir " +
                            tmp.file("o"));
  CHECK(r.exit_code == 2);
  CHECK(contains(r.err, "requires --H"));
}

TEST_CASE("irf writes the long-format csv with and without bands") {
  TempDir tmp;
  VarModel m = oracle::damped_var2(0.9);
  write_series_csv(tmp.file("series.csv"), simulate(m, 300, 9));

  auto r = run_cli(tmp, "irf --data " + tmp.file("series.csv") +
                            " --method ls --p 2 --H 6 --level 0.9 "
                            "--output-dir " + tmp.file("irf"));
  REQUIRE(r.exit_code == 0);
  std::string text = read_text_file(tmp.file("irf/irf.csv"));
  size_t lines = std::count(text.begin(), text.end(), '\n');
  CHECK(lines == size_t(1 + 2 * 2 * 7));  // header + K^2 (H+1)
  CHECK(text.rfind("response,shock,horizon,point,lower,upper", 0) == 0);
  CHECK_FALSE(contains(text, ",,"));  // every row carries a band

  auto r2 = run_cli(tmp, "irf --data " + tmp.file("series.csv") +
                             " --method ls --p 2 --H 6 --no-bands "
                             "--output-dir " + tmp.file("irf2"));
  REQUIRE(r2.exit_code == 0);
  CHECK(contains(read_text_file(tmp.file("irf2/irf.csv")), ",,"));

  auto no_h = run_cli(tmp, "irf --data " + tmp.file("series.csv") +
                               " --method ls --p 2 --output-dir " +
                               tmp.file("irf3"));
  CHECK(no_h.exit_code == 2);
  CHECK(contains(no_h.err, "requires --H"));
}

TEST_CASE("mc runs a scenario file and rerun reproduces it bit for bit") {
  TempDir tmp;
  McScenario sc;
  sc.dgp = oracle::damped_var2(0.9);
  sc.T = 120;
  sc.B = 4;
  sc.p_fit = 2;
  sc.H = 6;
  sc.level = 0.9;
  sc.seed_base = 23;
  MethodConfig ls;
  ls.label = "ls";
  ls.name = "ls";
  MethodConfig ridge;
  ridge.label = "ridge";
  ridge.name = "ridge";
  ridge.optimizer.max_evals = 30;
  ridge.split_lag = 1;
  sc.methods = {ls, ridge};
  write_text_file(tmp.file("scenario.toml"), scenario_to_toml(sc));

  const std::string out = tmp.file("mc");
  auto r = run_cli(tmp, "mc --scenario " + tmp.file("scenario.toml") +
                            " --output-dir " + out);
  REQUIRE(r.exit_code == 0);

  std::vector<std::string> files = {"relative_mse.csv", "coverage.csv",
                                    "length.csv", "length_median.csv",
                                    "metadata.json", "manifest.json"};
  std::vector<std::string> before;
  for (const auto& f : files) {
    REQUIRE(std::filesystem::exists(out + "/" + f));
    before.push_back(read_text_file(out + "/" + f));
  }

  auto meta = nlohmann::json::parse(before[4]);
  CHECK(meta["B"] == 4);
  CHECK(meta["seed_base"] == 23);
  REQUIRE(meta["methods"].size() == 2);

  auto rr = run_cli(tmp, "rerun --manifest " + out + "/manifest.json");
  REQUIRE(rr.exit_code == 0);
  for (size_t i = 0; i < files.size(); ++i)
    CHECK(read_text_file(out + "/" + files[i]) == before[i]);
}

TEST_CASE("rerun reproduces a tuned fit exactly") {
  TempDir tmp;
  VarModel m = oracle::damped_var2(0.9);
  write_series_csv(tmp.file("series.csv"), simulate(m, 240, 11));

  const std::string out = tmp.file("fit");
  auto r = run_cli(tmp, "fit --data " + tmp.file("series.csv") +
                            " --method ridge --tune --scheme block_cv "
                            "--folds 4 --max-evals 40 --p 2 --output-dir " +
                            out);
  REQUIRE(r.exit_code == 0);
  const std::string fit_before = read_text_file(out + "/fit.json");
  const std::string lambda_before = read_text_file(out + "/lambda.csv");

  auto rr = run_cli(tmp, "rerun --manifest " + out + "/manifest.json");
  REQUIRE(rr.exit_code == 0);
  CHECK(read_text_file(out + "/fit.json") == fit_before);
  CHECK(read_text_file(out + "/lambda.csv") == lambda_before);
}
