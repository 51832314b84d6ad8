#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rankvarma/mc.hpp"

namespace rankvarma {

// Flat `key = value` files. '#' starts a comment, values may be quoted, and lists are
// comma separated with optional brackets. Matrices are row-major lists.
class KeyValues {
 public:
  static KeyValues parse(std::istream& in, const std::string& source = "<input>");
  static KeyValues parse_text(const std::string& text, const std::string& source = "<input>");
  static KeyValues read(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int_or(const std::string& key, long long fallback) const;
  std::vector<double> get_list(const std::string& key) const;
  Matrix get_matrix(const std::string& key, int rows, int cols) const;
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  std::string source_;
};

// Null model from keys k, A1..Ap, B1..Bq (p, q optional; inferred from the highest index).
VarmaSpec spec_from_config(const KeyValues& kv);
void write_spec(std::ostream& out, const VarmaSpec& spec);

// Innovation law from `density` (gaussian | laplace | student | power-exponential) and `nu`.
RadialDensity density_from_config(const KeyValues& kv);

// Monte Carlo descriptor: null-model keys plus p1, q1, density, nu, sigma, scores, n,
// replications, alpha, seed, burn_in, tau, max_lag, oracle_sigma.
Experiment experiment_from_config(const KeyValues& kv);

// n x k CSV, one row per time point; a non-numeric first row is read as a header.
Series read_series_csv(const std::string& path, int expected_k = -1);
Series parse_series_csv(std::istream& in, int expected_k = -1, const std::string& source = "<input>");
void write_series_csv(std::ostream& out, const Series& x);

// %.12g
std::string format_number(double v);

}  // namespace rankvarma
