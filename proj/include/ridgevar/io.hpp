#pragma once

#include <map>
#include <string>
#include <vector>

#include "ridgevar/irf.hpp"
#include "ridgevar/montecarlo.hpp"

namespace ridgevar {

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Deterministic shortest round-trip formatting ("%.17g") used by every CSV
// and TOML writer, so identical inputs produce byte-identical artifacts.
std::string format_double(double x);

// Plain numeric CSV (no header): one row per line, comma separated.
MatrixXd read_csv_matrix(const std::string& path);
void write_csv_matrix(const std::string& path, const MatrixXd& m);

// Series CSV: rows are time points, columns are variables, first line is a
// header (variable names). Internally a series is K x N (variables x time),
// so these transpose.
MatrixXd read_series_csv(const std::string& path,
                         std::vector<std::string>* names = nullptr);
void write_series_csv(const std::string& path, const MatrixXd& series,
                      const std::vector<std::string>& names = {});

// Minimal TOML reader covering the config surface: [table.sub] headers,
// key = string | bool | number | array (numbers/strings, optionally nested
// one level for matrices), # comments, multi-line arrays. Values are stored
// under dotted paths ("model.A1"). Not a general TOML implementation.
struct TomlValue {
  enum class Kind { string, number, boolean, array };
  Kind kind = Kind::number;
  std::string str;
  double num = 0.0;
  bool flag = false;
  std::vector<TomlValue> items;
};

class TomlDoc {
 public:
  static TomlDoc parse(const std::string& text);
  static TomlDoc parse_file(const std::string& path);

  bool has(const std::string& key) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  int integer(const std::string& key) const;
  int integer_or(const std::string& key, int fallback) const;
  bool boolean_or(const std::string& key, bool fallback) const;
  std::string text(const std::string& key) const;
  std::string text_or(const std::string& key, const std::string& fallback) const;
  VectorXd vector(const std::string& key) const;
  MatrixXd matrix(const std::string& key) const;
  std::vector<std::string> strings(const std::string& key) const;
  // Immediate child names under a dotted prefix, in document order.
  std::vector<std::string> children(const std::string& prefix) const;

 private:
  const TomlValue& at(const std::string& key) const;
  std::map<std::string, TomlValue> values_;
  std::vector<std::string> order_;
};

// Model config: [model] with nu, sigma_u, and lag matrices A1..Ap.
VarModel model_from_toml(const TomlDoc& doc, const std::string& prefix = "model");
std::string model_to_toml(const VarModel& model);

// Method config table under `prefix` (e.g. "method.ridge"); `label` is the
// menu entry name, `estimator` in the table overrides the estimator name.
MethodConfig method_from_toml(const TomlDoc& doc, const std::string& label,
                              const std::string& prefix);

// Scenario config: [scenario] (T, B, p_fit, H, level, normalize, seed_base,
// baseline, methods = [..]), [model], and one [method.<label>] per entry.
McScenario scenario_from_toml(const TomlDoc& doc);
std::string scenario_to_toml(const McScenario& scenario);

// Structured results as JSON text (stable key order, %.17g numbers).
std::string fit_to_json(const FitResult& fit);

// Long-format IRF CSV: response,shock,horizon,point,lower,upper with empty
// band cells when absent.
void write_irf_csv(const std::string& path, const IrfResult& irf,
                   const std::vector<std::string>& names = {});

// One CSV per table (kind.csv) with columns variable,method,h=...; horizon
// columns are {1,4,8,12,16,20,24} intersected with the computed range.
// Writes metadata.json (seeds, exclusions, mean selected penalties) next to
// the tables.
void write_mc_tables(const std::string& dir, const McResult& result);

}  // namespace ridgevar
