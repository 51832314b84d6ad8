#include "rankvarma/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace rankvarma {

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

namespace {

nlohmann::json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round12(v);
}

nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(num(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

nlohmann::json to_json(const Orders& o) {
  return {{"p0", o.p0}, {"q0", o.q0}, {"p1", o.p1}, {"q1", o.q1}, {"pi", o.pi()}, {"pi0", o.pi0()}};
}

nlohmann::json to_json(const TestReport& r) {
  const Diagnostics& d = r.diagnostics;
  nlohmann::json diag = {{"tyler_iterations", d.tyler_iterations},
                         {"tyler_residual", num(d.tyler_residual)},
                         {"j_condition", num(d.j_condition)},
                         {"lags_used", d.lags_used},
                         {"neglected_q_mass", num(d.neglected_q_mass)},
                         {"d_condition", num(d.d_condition)},
                         {"d_ill_conditioned", d.d_ill_conditioned},
                         {"e_k1_sq", num(d.e_k1_sq)},
                         {"e_k2_sq", num(d.e_k2_sq)}};
  if (!d.crosscov.empty()) {
    nlohmann::json cc = nlohmann::json::array();
    for (const auto& g : d.crosscov) cc.push_back(matrix_json(g));
    diag["crosscov"] = cc;
  }
  return {{"statistic", num(r.statistic)}, {"df", r.df},         {"p_value", num(r.p_value)},
          {"alpha", num(r.alpha)},         {"reject", r.reject}, {"scores", r.scores},
          {"n", r.n},                      {"k", r.k},           {"orders", to_json(r.orders)},
          {"diagnostics", diag}};
}

nlohmann::json to_json(const McSummary& s, bool with_statistics) {
  nlohmann::json j = {{"replications", s.replications},
                      {"failures", s.failures},
                      {"rejections", s.rejections},
                      {"rejection_rate", num(s.rejection_rate)},
                      {"ci_low", num(s.ci_low)},
                      {"ci_high", num(s.ci_high)},
                      {"df", s.df},
                      {"noncentrality", num(s.noncentrality)},
                      {"predicted_power", num(s.predicted_power)},
                      {"ks_distance", num(s.ks_distance)},
                      {"ks_critical", num(s.ks_critical)},
                      {"errors", s.errors}};
  if (with_statistics) {
    nlohmann::json st = nlohmann::json::array();
    for (double v : s.statistics) st.push_back(num(v));
    j["statistics"] = st;
    j["streams"] = s.streams;
  }
  return j;
}

nlohmann::json to_json(const EfficiencyReport& r) {
  return {{"scores", r.scores}, {"density", r.density},       {"k", r.k},
          {"dk", num(r.dk)},    {"ck", num(r.ck)},            {"e_k1_sq", num(r.e_k1_sq)},
          {"e_k2_sq", num(r.e_k2_sq)}, {"are", num(r.are)}};
}

nlohmann::json to_json(const RootCheckReport& r) {
  return {{"passes", r.passes},
          {"ar_min_root_modulus", num(r.ar_min_root_modulus)},
          {"ma_min_root_modulus", num(r.ma_min_root_modulus)},
          {"ar_leading_singular", r.ar_leading_singular},
          {"ma_leading_singular", r.ma_leading_singular},
          {"coprimeness_checked", r.coprimeness_checked}};
}

nlohmann::json to_json(const std::vector<InvarianceCheck>& checks) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : checks)
    out.push_back({{"name", c.name},
                   {"max_deviation", num(c.max_deviation)},
                   {"threshold", num(c.threshold)},
                   {"judged", c.judged},
                   {"pass", c.pass}});
  return out;
}

nlohmann::json to_json(const std::vector<TrendReport>& trend) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : trend) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : t.points) pts.push_back({{"n", p.n}, {"median", num(p.median)}});
    out.push_back({{"lag", t.lag}, {"points", pts}, {"slope", num(t.slope)}, {"excluded", t.excluded}});
  }
  return out;
}

}  // namespace rankvarma
