#include "ridgevar/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "ridgevar/errors.hpp"

namespace ridgevar {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

int bracket_balance(const std::string& s) {
  int depth = 0;
  bool in_str = false;
  for (char c : s) {
    if (c == '"') in_str = !in_str;
    if (in_str) continue;
    if (c == '[') ++depth;
    if (c == ']') --depth;
  }
  return depth;
}

double parse_number(const std::string& tok) {
  const std::string t = trim(tok);
  if (t.empty()) throw input_error("toml: empty value");
  size_t consumed = 0;
  double x;
  try {
    x = std::stod(t, &consumed);
  } catch (const std::exception&) {
    throw input_error("toml: not a number: " + t);
  }
  if (consumed != t.size()) throw input_error("toml: not a number: " + t);
  return x;
}

TomlValue parse_value_at(const std::string& s, size_t& pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos >= s.size()) throw input_error("toml: missing value");
  TomlValue v;
  if (s[pos] == '"') {
    size_t close = s.find('"', pos + 1);
    if (close == std::string::npos) throw input_error("toml: unterminated string");
    v.kind = TomlValue::Kind::string;
    v.str = s.substr(pos + 1, close - pos - 1);
    pos = close + 1;
    return v;
  }
  if (s[pos] == '[') {
    v.kind = TomlValue::Kind::array;
    ++pos;
    while (true) {
      while (pos < s.size() &&
             (std::isspace(static_cast<unsigned char>(s[pos])) || s[pos] == ','))
        ++pos;
      if (pos >= s.size()) throw input_error("toml: unterminated array");
      if (s[pos] == ']') {
        ++pos;
        return v;
      }
      v.items.push_back(parse_value_at(s, pos));
    }
  }
  size_t end = pos;
  while (end < s.size() && s[end] != ',' && s[end] != ']') ++end;
  const std::string tok = trim(s.substr(pos, end - pos));
  pos = end;
  if (tok == "true" || tok == "false") {
    v.kind = TomlValue::Kind::boolean;
    v.flag = tok == "true";
    return v;
  }
  v.kind = TomlValue::Kind::number;
  v.num = parse_number(tok);
  return v;
}

TomlValue parse_value(const std::string& s) {
  size_t pos = 0;
  TomlValue v = parse_value_at(s, pos);
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos != s.size()) throw input_error("toml: trailing content: " + s);
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool all_numeric(const std::vector<std::string>& toks) {
  for (const auto& t : toks) {
    try {
      parse_number(t);
    } catch (const input_error&) {
      return false;
    }
  }
  return true;
}

std::vector<std::vector<double>> to_rows(const MatrixXd& m) {
  std::vector<std::vector<double>> rows(m.rows());
  for (int r = 0; r < m.rows(); ++r) {
    rows[r].resize(m.cols());
    for (int c = 0; c < m.cols(); ++c) rows[r][c] = m(r, c);
  }
  return rows;
}

std::string format_array(const VectorXd& v) {
  std::string out = "[";
  for (int i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v(i));
  }
  return out + "]";
}

std::string format_matrix(const MatrixXd& m) {
  std::string out = "[";
  for (int r = 0; r < m.rows(); ++r) {
    if (r) out += ", ";
    out += format_array(m.row(r).transpose());
  }
  return out + "]";
}

std::string scheme_name(CvPlan::Scheme s) {
  switch (s) {
    case CvPlan::Scheme::out_of_sample: return "out_of_sample";
    case CvPlan::Scheme::block_cv: return "block_cv";
    default: return "block_nondep_cv";
  }
}

CvPlan::Scheme scheme_from_name(const std::string& s) {
  if (s == "out_of_sample") return CvPlan::Scheme::out_of_sample;
  if (s == "block_cv") return CvPlan::Scheme::block_cv;
  if (s == "block_nondep_cv") return CvPlan::Scheme::block_nondep_cv;
  throw input_error("unknown cv scheme: " + s);
}

std::vector<std::string> default_names(int K) {
  std::vector<std::string> names;
  for (int k = 1; k <= K; ++k) names.push_back("y" + std::to_string(k));
  return names;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write file: " + path);
  out << content;
  if (!out) throw input_error("failed writing file: " + path);
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

MatrixXd read_csv_matrix(const std::string& path) {
  std::istringstream ss(read_text_file(path));
  std::string line;
  std::vector<std::vector<double>> rows;
  while (std::getline(ss, line)) {
    line = trim(line);
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& tok : split_csv_line(line)) row.push_back(parse_number(tok));
    if (!rows.empty() && row.size() != rows.front().size())
      throw input_error("csv: ragged rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw input_error("csv: empty file " + path);
  MatrixXd m(rows.size(), rows.front().size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

void write_csv_matrix(const std::string& path, const MatrixXd& m) {
  std::string out;
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (c) out += ",";
      out += format_double(m(r, c));
    }
    out += "\n";
  }
  write_text_file(path, out);
}

MatrixXd read_series_csv(const std::string& path,
                         std::vector<std::string>* names) {
  std::istringstream ss(read_text_file(path));
  std::string line;
  std::vector<std::vector<double>> rows;
  bool first = true;
  while (std::getline(ss, line)) {
    line = trim(line);
    if (line.empty()) continue;
    auto toks = split_csv_line(line);
    if (first) {
      first = false;
      if (!all_numeric(toks)) {
        if (names) *names = toks;
        continue;
      }
    }
    std::vector<double> row;
    for (const auto& tok : toks) row.push_back(parse_number(tok));
    if (!rows.empty() && row.size() != rows.front().size())
      throw input_error("csv: ragged rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw input_error("csv: no observations in " + path);
  MatrixXd series(rows.front().size(), rows.size());  // K x N
  for (size_t t = 0; t < rows.size(); ++t)
    for (size_t k = 0; k < rows[t].size(); ++k) series(k, t) = rows[t][k];
  return series;
}

void write_series_csv(const std::string& path, const MatrixXd& series,
                      const std::vector<std::string>& names) {
  const int K = static_cast<int>(series.rows());
  auto hdr = names.empty() ? default_names(K) : names;
  if (static_cast<int>(hdr.size()) != K)
    throw input_error("series csv: name count != variable count");
  std::string out;
  for (int k = 0; k < K; ++k) {
    if (k) out += ",";
    out += hdr[k];
  }
  out += "\n";
  for (int t = 0; t < series.cols(); ++t) {
    for (int k = 0; k < K; ++k) {
      if (k) out += ",";
      out += format_double(series(k, t));
    }
    out += "\n";
  }
  write_text_file(path, out);
}

TomlDoc TomlDoc::parse(const std::string& text) {
  TomlDoc doc;
  std::istringstream ss(text);
  std::string line, prefix;
  while (std::getline(ss, line)) {
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw input_error("toml: malformed table header: " + line);
      prefix = trim(line.substr(1, line.size() - 2));
      if (prefix.empty()) throw input_error("toml: empty table header");
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw input_error("toml: expected key = value: " + line);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw input_error("toml: empty key");
    while (bracket_balance(value) > 0) {
      std::string more;
      if (!std::getline(ss, more))
        throw input_error("toml: unterminated array for key " + key);
      value += " " + trim(strip_comment(more));
    }
    std::string full = prefix.empty() ? key : prefix + "." + key;
    if (doc.values_.count(full))
      throw input_error("toml: duplicate key " + full);
    doc.values_[full] = parse_value(value);
    doc.order_.push_back(full);
  }
  return doc;
}

TomlDoc TomlDoc::parse_file(const std::string& path) {
  return parse(read_text_file(path));
}

const TomlValue& TomlDoc::at(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw input_error("config: missing key " + key);
  return it->second;
}

bool TomlDoc::has(const std::string& key) const { return values_.count(key) > 0; }

double TomlDoc::number(const std::string& key) const {
  const TomlValue& v = at(key);
  if (v.kind != TomlValue::Kind::number)
    throw input_error("config: " + key + " is not a number");
  return v.num;
}

double TomlDoc::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

int TomlDoc::integer(const std::string& key) const {
  double x = number(key);
  double r = std::llround(x);
  if (std::abs(x - r) > 1e-9)
    throw input_error("config: " + key + " is not an integer");
  return static_cast<int>(r);
}

int TomlDoc::integer_or(const std::string& key, int fallback) const {
  return has(key) ? integer(key) : fallback;
}

bool TomlDoc::boolean_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const TomlValue& v = at(key);
  if (v.kind != TomlValue::Kind::boolean)
    throw input_error("config: " + key + " is not a boolean");
  return v.flag;
}

std::string TomlDoc::text(const std::string& key) const {
  const TomlValue& v = at(key);
  if (v.kind != TomlValue::Kind::string)
    throw input_error("config: " + key + " is not a string");
  return v.str;
}

std::string TomlDoc::text_or(const std::string& key,
                             const std::string& fallback) const {
  return has(key) ? text(key) : fallback;
}

VectorXd TomlDoc::vector(const std::string& key) const {
  const TomlValue& v = at(key);
  if (v.kind != TomlValue::Kind::array)
    throw input_error("config: " + key + " is not an array");
  VectorXd out(v.items.size());
  for (size_t i = 0; i < v.items.size(); ++i) {
    if (v.items[i].kind != TomlValue::Kind::number)
      throw input_error("config: " + key + " has non-numeric entries");
    out(i) = v.items[i].num;
  }
  return out;
}

MatrixXd TomlDoc::matrix(const std::string& key) const {
  const TomlValue& v = at(key);
  if (v.kind != TomlValue::Kind::array || v.items.empty())
    throw input_error("config: " + key + " is not a non-empty array");
  if (v.items.front().kind == TomlValue::Kind::number) {
    VectorXd row = vector(key);
    return row.transpose();
  }
  const size_t cols = v.items.front().items.size();
  MatrixXd out(v.items.size(), cols);
  for (size_t r = 0; r < v.items.size(); ++r) {
    const TomlValue& row = v.items[r];
    if (row.kind != TomlValue::Kind::array || row.items.size() != cols)
      throw input_error("config: " + key + " is ragged");
    for (size_t c = 0; c < cols; ++c) {
      if (row.items[c].kind != TomlValue::Kind::number)
        throw input_error("config: " + key + " has non-numeric entries");
      out(r, c) = row.items[c].num;
    }
  }
  return out;
}

std::vector<std::string> TomlDoc::strings(const std::string& key) const {
  const TomlValue& v = at(key);
  if (v.kind != TomlValue::Kind::array)
    throw input_error("config: " + key + " is not an array");
  std::vector<std::string> out;
  for (const auto& item : v.items) {
    if (item.kind != TomlValue::Kind::string)
      throw input_error("config: " + key + " has non-string entries");
    out.push_back(item.str);
  }
  return out;
}

std::vector<std::string> TomlDoc::children(const std::string& prefix) const {
  std::vector<std::string> out;
  const std::string pre = prefix + ".";
  for (const auto& key : order_) {
    if (key.rfind(pre, 0) != 0) continue;
    std::string rest = key.substr(pre.size());
    std::string child = rest.substr(0, rest.find('.'));
    if (std::find(out.begin(), out.end(), child) == out.end())
      out.push_back(child);
  }
  return out;
}

VarModel model_from_toml(const TomlDoc& doc, const std::string& prefix) {
  VarModel m;
  m.nu = doc.vector(prefix + ".nu");
  m.sigma_u = doc.matrix(prefix + ".sigma_u");
  int i = 1;
  while (doc.has(prefix + ".A" + std::to_string(i))) {
    m.A.push_back(doc.matrix(prefix + ".A" + std::to_string(i)));
    ++i;
  }
  if (m.A.empty())
    throw input_error("config: " + prefix + " has no lag matrices A1..Ap");
  m.validate();
  return m;
}

std::string model_to_toml(const VarModel& model) {
  std::string out = "[model]\n";
  out += "nu = " + format_array(model.nu) + "\n";
  out += "sigma_u = " + format_matrix(model.sigma_u) + "\n";
  for (size_t j = 0; j < model.A.size(); ++j)
    out += "A" + std::to_string(j + 1) + " = " + format_matrix(model.A[j]) + "\n";
  return out;
}

MethodConfig method_from_toml(const TomlDoc& doc, const std::string& label,
                              const std::string& prefix) {
  MethodConfig cfg;
  cfg.label = label;
  cfg.name = doc.text_or(prefix + ".estimator", label);
  if (doc.has(prefix + ".scheme"))
    cfg.cv.scheme = scheme_from_name(doc.text(prefix + ".scheme"));
  cfg.cv.folds = doc.integer_or(prefix + ".folds", cfg.cv.folds);
  cfg.cv.os_split = doc.number_or(prefix + ".os_split", cfg.cv.os_split);
  cfg.cv.gap = doc.integer_or(prefix + ".gap", cfg.cv.gap);
  cfg.cv.inverse_variance_weights = doc.boolean_or(
      prefix + ".inverse_variance_weights", cfg.cv.inverse_variance_weights);
  cfg.search.r = doc.integer_or(prefix + ".r", cfg.search.r);
  cfg.search.upper_bound =
      doc.number_or(prefix + ".upper_bound", cfg.search.upper_bound);
  cfg.search.extrapolate_tail = doc.boolean_or(prefix + ".extrapolate_tail",
                                               cfg.search.extrapolate_tail);
  cfg.optimizer.max_evals =
      doc.integer_or(prefix + ".max_evals", cfg.optimizer.max_evals);
  cfg.optimizer.mesh_tolerance =
      doc.number_or(prefix + ".mesh_tolerance", cfg.optimizer.mesh_tolerance);
  cfg.optimizer.initial_mesh =
      doc.number_or(prefix + ".initial_mesh", cfg.optimizer.initial_mesh);
  cfg.split_lag = doc.integer_or(prefix + ".split_lag", cfg.split_lag);
  cfg.theta = doc.number_or(prefix + ".theta", cfg.theta);
  if (doc.has(prefix + ".tightness_grid"))
    cfg.tightness_grid = doc.vector(prefix + ".tightness_grid");
  cfg.xi = doc.number_or(prefix + ".xi", cfg.xi);
  cfg.q = doc.integer_or(prefix + ".q", cfg.q);
  return cfg;
}

McScenario scenario_from_toml(const TomlDoc& doc) {
  McScenario sc;
  sc.dgp = model_from_toml(doc);
  sc.T = doc.integer_or("scenario.T", sc.T);
  sc.B = doc.integer_or("scenario.B", sc.B);
  sc.p_fit = doc.integer_or("scenario.p_fit", sc.p_fit);
  sc.H = doc.integer_or("scenario.H", sc.H);
  sc.level = doc.number_or("scenario.level", sc.level);
  sc.normalize = doc.boolean_or("scenario.normalize", sc.normalize);
  sc.seed_base = static_cast<std::uint64_t>(
      doc.number_or("scenario.seed_base", double(sc.seed_base)));
  sc.baseline = doc.text_or("scenario.baseline", sc.baseline);
  for (const auto& label : doc.strings("scenario.methods"))
    sc.methods.push_back(method_from_toml(doc, label, "method." + label));
  return sc;
}

std::string scenario_to_toml(const McScenario& sc) {
  std::string out = "[scenario]\n";
  out += "T = " + std::to_string(sc.T) + "\n";
  out += "B = " + std::to_string(sc.B) + "\n";
  out += "p_fit = " + std::to_string(sc.p_fit) + "\n";
  out += "H = " + std::to_string(sc.H) + "\n";
  out += "level = " + format_double(sc.level) + "\n";
  out += std::string("normalize = ") + (sc.normalize ? "true" : "false") + "\n";
  out += "seed_base = " + std::to_string(sc.seed_base) + "\n";
  out += "baseline = \"" + sc.baseline + "\"\n";
  out += "methods = [";
  for (size_t i = 0; i < sc.methods.size(); ++i) {
    if (i) out += ", ";
    out += "\"" + sc.methods[i].label + "\"";
  }
  out += "]\n\n";
  out += model_to_toml(sc.dgp);
  for (const auto& m : sc.methods) {
    out += "\n[method." + m.label + "]\n";
    out += "estimator = \"" + m.name + "\"\n";
    out += "scheme = \"" + scheme_name(m.cv.scheme) + "\"\n";
    out += "folds = " + std::to_string(m.cv.folds) + "\n";
    out += "os_split = " + format_double(m.cv.os_split) + "\n";
    out += "gap = " + std::to_string(m.cv.gap) + "\n";
    out += std::string("inverse_variance_weights = ") +
           (m.cv.inverse_variance_weights ? "true" : "false") + "\n";
    out += "r = " + std::to_string(m.search.r) + "\n";
    out += "upper_bound = " + format_double(m.search.upper_bound) + "\n";
    out += std::string("extrapolate_tail = ") +
           (m.search.extrapolate_tail ? "true" : "false") + "\n";
    out += "max_evals = " + std::to_string(m.optimizer.max_evals) + "\n";
    out += "mesh_tolerance = " + format_double(m.optimizer.mesh_tolerance) + "\n";
    out += "initial_mesh = " + format_double(m.optimizer.initial_mesh) + "\n";
    out += "split_lag = " + std::to_string(m.split_lag) + "\n";
    out += "theta = " + format_double(m.theta) + "\n";
    if (m.tightness_grid.size() > 0)
      out += "tightness_grid = " + format_array(m.tightness_grid) + "\n";
    out += "xi = " + format_double(m.xi) + "\n";
    out += "q = " + std::to_string(m.q) + "\n";
  }
  return out;
}

std::string fit_to_json(const FitResult& fit) {
  json j;
  j["method"] = fit.method_tag;
  j["K"] = fit.K;
  j["p"] = fit.p;
  j["T"] = fit.T;
  j["includes_intercept"] = fit.includes_intercept;
  j["beta_hat"] = std::vector<double>(fit.beta_hat.data(),
                                      fit.beta_hat.data() + fit.beta_hat.size());
  j["B_hat"] = to_rows(fit.B_hat);
  if (fit.nu_hat)
    j["nu_hat"] = std::vector<double>(fit.nu_hat->data(),
                                      fit.nu_hat->data() + fit.nu_hat->size());
  j["sigma_hat"] = to_rows(fit.sigma_hat);
  j["gamma_hat"] = to_rows(fit.gamma_hat);
  if (fit.penalty) {
    json pj;
    switch (fit.penalty->structure_tag) {
      case PenaltyMatrix::Structure::isotropic: pj["structure"] = "isotropic"; break;
      case PenaltyMatrix::Structure::lag_adapted: pj["structure"] = "lag_adapted"; break;
      case PenaltyMatrix::Structure::partitioned: pj["structure"] = "partitioned"; break;
      default: pj["structure"] = "general_diagonal";
    }
    pj["diag"] = std::vector<double>(fit.penalty->diag.data(),
                                     fit.penalty->diag.data() +
                                         fit.penalty->diag.size());
    if (fit.penalty->lag_values)
      pj["lag_values"] = std::vector<double>(
          fit.penalty->lag_values->data(),
          fit.penalty->lag_values->data() + fit.penalty->lag_values->size());
    j["penalty"] = pj;
  }
  if (fit.center)
    j["center"] = std::vector<double>(fit.center->data(),
                                      fit.center->data() + fit.center->size());
  return j.dump(2) + "\n";
}

void write_irf_csv(const std::string& path, const IrfResult& irf,
                   const std::vector<std::string>& names) {
  if (irf.theta.empty()) throw input_error("irf csv: empty result");
  const int K = static_cast<int>(irf.theta[0].rows());
  auto vars = names.empty() ? default_names(K) : names;
  if (static_cast<int>(vars.size()) != K)
    throw input_error("irf csv: name count != variable count");
  std::string out = "response,shock,horizon,point,lower,upper\n";
  for (int k = 0; k < K; ++k)
    for (int m = 0; m < K; ++m)
      for (int h = 0; h <= irf.H; ++h) {
        out += vars[k] + "," + vars[m] + "," + std::to_string(h) + ",";
        out += format_double(irf.theta[h](k, m));
        if (irf.has_bands()) {
          out += "," + format_double(irf.lower[h](k, m));
          out += "," + format_double(irf.upper[h](k, m));
        } else {
          out += ",,";
        }
        out += "\n";
      }
  write_text_file(path, out);
}

void write_mc_tables(const std::string& dir, const McResult& result) {
  std::filesystem::create_directories(dir);
  const std::vector<int> wanted = {1, 4, 8, 12, 16, 20, 24};
  for (const auto& table : result.tables) {
    std::vector<int> cols;
    for (int h : wanted)
      if (std::find(table.horizons.begin(), table.horizons.end(), h) !=
          table.horizons.end())
        cols.push_back(h);
    std::string out = "variable,method";
    for (int h : cols) out += ",h" + std::to_string(h);
    out += "\n";
    const int M = static_cast<int>(table.methods.size());
    for (int k = 0; k < table.K; ++k)
      for (int mi = 0; mi < M; ++mi) {
        out += "y" + std::to_string(k + 1) + "," + table.methods[mi];
        for (int h : cols) out += "," + format_double(table.cell(k, mi, h));
        out += "\n";
      }
    write_text_file(dir + "/" + table.kind + ".csv", out);
  }

  json meta;
  meta["seed_base"] = result.scenario.seed_base;
  meta["B"] = result.scenario.B;
  meta["T"] = result.scenario.T;
  meta["p_fit"] = result.scenario.p_fit;
  meta["H"] = result.scenario.H;
  meta["level"] = result.scenario.level;
  meta["normalize"] = result.scenario.normalize;
  meta["baseline"] = result.scenario.baseline;
  json methods = json::array();
  for (size_t mi = 0; mi < result.method_labels.size(); ++mi) {
    json mj;
    mj["label"] = result.method_labels[mi];
    mj["estimator"] = result.scenario.methods[mi].name;
    mj["excluded_replications"] = result.exclusions[mi];
    if (result.mean_penalty[mi].size() > 0)
      mj["mean_selected_penalty"] = std::vector<double>(
          result.mean_penalty[mi].data(),
          result.mean_penalty[mi].data() + result.mean_penalty[mi].size());
    methods.push_back(mj);
  }
  meta["methods"] = methods;
  write_text_file(dir + "/metadata.json", meta.dump(2) + "\n");
}

}  // namespace ridgevar
