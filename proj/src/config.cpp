#include "rankvarma/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rankvarma/errors.hpp"

namespace rankvarma {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double to_double(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigError(what + ": '" + t + "' is not a number");
  }
  if (used != t.size()) throw ConfigError(what + ": '" + t + "' is not a number");
  return v;
}

// Strip an unquoted trailing comment.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

}  // namespace

KeyValues KeyValues::parse(std::istream& in, const std::string& source) {
  KeyValues kv;
  kv.source_ = source;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty() || line.front() == '[') continue;  // blank or section header
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    kv.values_[key] = value;
  }
  return kv;
}

KeyValues KeyValues::parse_text(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  return parse(in, source);
}

KeyValues KeyValues::read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return parse(in, path);
}

const std::string& KeyValues::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(source_ + ": missing key '" + key + "'");
  return it->second;
}

std::string KeyValues::get_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? get(key) : fallback;
}

double KeyValues::get_double(const std::string& key) const { return to_double(get(key), source_ + ": " + key); }

double KeyValues::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long KeyValues::get_int(const std::string& key) const {
  const double v = get_double(key);
  if (v != std::floor(v)) throw ConfigError(source_ + ": " + key + " must be an integer");
  return static_cast<long long>(v);
}

long long KeyValues::get_int_or(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::vector<double> KeyValues::get_list(const std::string& key) const {
  std::string v = trim(get(key));
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') throw ConfigError(source_ + ": " + key + ": unbalanced brackets");
    v = v.substr(1, v.size() - 2);
  }
  std::vector<double> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(item, source_ + ": " + key));
  return out;
}

Matrix KeyValues::get_matrix(const std::string& key, int rows, int cols) const {
  const auto xs = get_list(key);
  if (static_cast<int>(xs.size()) != rows * cols)
    throw ConfigError(source_ + ": " + key + " needs " + std::to_string(rows * cols) + " entries, got " +
                      std::to_string(xs.size()));
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = xs[static_cast<std::size_t>(i) * cols + j];
  return m;
}

namespace {

int highest_index(const KeyValues& kv, char letter) {
  int top = 0;
  for (const auto& [key, value] : kv.values()) {
    if (key.size() < 2 || key[0] != letter) continue;
    bool digits = true;
    for (std::size_t i = 1; i < key.size(); ++i) digits = digits && std::isdigit(static_cast<unsigned char>(key[i]));
    if (digits) top = std::max(top, std::stoi(key.substr(1)));
  }
  return top;
}

}  // namespace

VarmaSpec spec_from_config(const KeyValues& kv) {
  VarmaSpec spec;
  const long long k = kv.get_int("k");
  if (k < 1) throw ConfigError("k must be >= 1");
  spec.k = static_cast<int>(k);
  const int p = static_cast<int>(kv.get_int_or("p", highest_index(kv, 'A')));
  const int q = static_cast<int>(kv.get_int_or("q", highest_index(kv, 'B')));
  if (p < 0 || q < 0) throw ConfigError("orders must be nonnegative");
  for (int i = 1; i <= p; ++i) spec.ar.push_back(kv.get_matrix("A" + std::to_string(i), spec.k, spec.k));
  for (int j = 1; j <= q; ++j) spec.ma.push_back(kv.get_matrix("B" + std::to_string(j), spec.k, spec.k));
  spec.validate();
  return spec;
}

void write_spec(std::ostream& out, const VarmaSpec& spec) {
  out << "k = " << spec.k << "\n";
  auto put = [&](const std::string& name, const Matrix& m) {
    out << name << " = [";
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) out << (i + j ? ", " : "") << format_number(m(i, j));
    out << "]\n";
  };
  for (int i = 0; i < spec.p(); ++i) put("A" + std::to_string(i + 1), spec.ar[i]);
  for (int j = 0; j < spec.q(); ++j) put("B" + std::to_string(j + 1), spec.ma[j]);
}

RadialDensity density_from_config(const KeyValues& kv) {
  const std::string name = kv.get_or("density", "gaussian");
  return RadialDensity::from_name(name, kv.get_double_or("nu", 0.0));
}

Experiment experiment_from_config(const KeyValues& kv) {
  Experiment e;
  e.null = spec_from_config(kv);
  const int k = e.null.k;
  e.p1 = static_cast<int>(kv.get_int("p1"));
  e.q1 = static_cast<int>(kv.get_int_or("q1", e.null.q()));
  e.law = density_from_config(kv);
  if (kv.has("sigma")) e.sigma = kv.get_matrix("sigma", k, k);
  e.method = parse_method(kv.get_or("scores", "vdw"));
  e.n = static_cast<int>(kv.get_int_or("n", e.n));
  e.replications = static_cast<int>(kv.get_int_or("replications", kv.get_int_or("R", e.replications)));
  e.alpha = kv.get_double_or("alpha", e.alpha);
  e.seed = static_cast<std::uint64_t>(kv.get_int_or("seed", static_cast<long long>(e.seed)));
  e.burn_in = static_cast<int>(kv.get_int_or("burn_in", e.burn_in));
  e.max_lag = static_cast<int>(kv.get_int_or("max_lag", -1));
  e.oracle_sigma = kv.get_or("oracle_sigma", "false") == "true";
  if (kv.has("tau")) {
    const auto t = kv.get_list("tau");
    e.tau = Eigen::Map<const Vector>(t.data(), static_cast<Eigen::Index>(t.size()));
  }
  e.validate();
  return e;
}

Series parse_series_csv(std::istream& in, int expected_k, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  int width = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    std::vector<double> vals;
    bool numeric = true;
    for (auto& c : cells) {
      if (c.size() >= 2 && c.front() == '"' && c.back() == '"') c = c.substr(1, c.size() - 2);
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (c.empty() || end != c.c_str() + c.size()) {
        numeric = false;
        break;
      }
      vals.push_back(v);
    }
    if (!numeric) {
      if (rows.empty() && width < 0) {
        width = static_cast<int>(cells.size());  // header
        continue;
      }
      throw ConfigError(source + ":" + std::to_string(lineno) + ": non-numeric value");
    }
    if (width < 0) width = static_cast<int>(vals.size());
    if (static_cast<int>(vals.size()) != width)
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected " + std::to_string(width) + " columns, got " +
                        std::to_string(vals.size()));
    for (double v : vals)
      if (!std::isfinite(v)) throw ConfigError(source + ":" + std::to_string(lineno) + ": non-finite value");
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw ConfigError(source + ": no data rows");
  if (expected_k > 0 && width != expected_k)
    throw ConfigError(source + ": expected " + std::to_string(expected_k) + " columns, got " + std::to_string(width));
  Series x(width, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t t = 0; t < rows.size(); ++t)
    for (int i = 0; i < width; ++i) x(i, static_cast<Eigen::Index>(t)) = rows[t][i];
  return x;
}

Series read_series_csv(const std::string& path, int expected_k) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return parse_series_csv(in, expected_k, path);
}

void write_series_csv(std::ostream& out, const Series& x) {
  for (Eigen::Index i = 0; i < x.rows(); ++i) out << (i ? "," : "") << "x" << (i + 1);
  out << "\n";
  for (Eigen::Index t = 0; t < x.cols(); ++t) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) out << (i ? "," : "") << format_number(x(i, t));
    out << "\n";
  }
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace rankvarma
