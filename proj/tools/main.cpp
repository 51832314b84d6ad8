#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rankvarma/adaptive.hpp"
#include "rankvarma/are.hpp"
#include "rankvarma/config.hpp"
#include "rankvarma/errors.hpp"
#include "rankvarma/linalg.hpp"
#include "rankvarma/mc.hpp"
#include "rankvarma/reference_tables.hpp"
#include "rankvarma/report.hpp"
#include "rankvarma/rng.hpp"

using namespace rankvarma;

namespace {

// Exit codes: 0 done, 1 --check mismatch, 2 bad input, 3 numerical failure.
constexpr int kInput = 2, kNumeric = 3;

std::string g_stage = "startup";

std::pair<int, int> parse_orders(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw ConfigError("orders must look like p1,q1");
  try {
    return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw ConfigError("orders must look like p1,q1");
  }
}

std::vector<double> parse_list(const std::string& s) {
  KeyValues kv;
  kv.set("list", s);
  return kv.get_list("list");
}

int parse_lags(const std::string& s) {
  if (s == "full") return -1;
  try {
    const int l = std::stoi(s);
    if (l < 1) throw ConfigError("--lags must be 'full' or a positive integer");
    return l;
  } catch (const std::invalid_argument&) {
    throw ConfigError("--lags must be 'full' or a positive integer");
  }
}

std::string cell(double v) { return std::isfinite(v) ? format_number(v) : ""; }

VarmaSpec load_null(const std::string& path, bool require_a) {
  g_stage = "reading null model";
  const VarmaSpec spec = spec_from_config(KeyValues::read(path));
  if (require_a) {
    const RootCheckReport rep = check_roots(spec);
    if (!rep.passes) {
      std::cerr << to_json(rep).dump(2) << "\n";
      throw DomainError("null model fails the stationarity/invertibility check: " + rep.summary());
    }
  }
  return spec;
}

struct TestArgs {
  std::string null_path, data_path, orders, scores = "vdw", lags = "full", format = "json";
  double alpha = 0.05;
  std::string bandwidth = "auto";
  double tyler_tol = 1e-12;
  int tyler_max_iter = 500;
  bool crosscov = false;
};

int cmd_test(const TestArgs& a) {
  const VarmaSpec null = load_null(a.null_path, true);
  const auto [p1, q1] = a.orders.empty() ? std::pair<int, int>{null.p() + 1, null.q()} : parse_orders(a.orders);
  g_stage = "parsing options";
  const TestMethod method = parse_method(a.scores);
  TestOptions opt;
  opt.alpha = a.alpha;
  opt.max_lag = parse_lags(a.lags);
  opt.tyler.tol = a.tyler_tol;
  opt.tyler.max_iter = a.tyler_max_iter;
  if (a.bandwidth != "auto") {
    std::size_t used = 0;
    double h = 0.0;
    try {
      h = std::stod(a.bandwidth, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != a.bandwidth.size() || !(h > 0.0)) throw ConfigError("--kde-bandwidth must be auto or a positive number");
    opt.kde_bandwidth = h;
  }
  opt.keep_crosscov = a.crosscov;
  opt.exec = Exec::serial;
  g_stage = "reading series";
  const Series x = read_series_csv(a.data_path, null.k);
  g_stage = "building structural matrices";
  const StructuralSet ss = build_structural(null, p1, q1, static_cast<int>(x.cols()));
  g_stage = "computing residuals";
  const Series z = residuals(null, x);
  g_stage = "computing the statistic";
  const TestReport rep = run_test(ss, z, method, opt);
  if (a.format == "csv") {
    std::cout << "statistic,df,p_value,alpha,reject,scores,n,k\n"
              << format_number(rep.statistic) << "," << rep.df << "," << format_number(rep.p_value) << ","
              << format_number(rep.alpha) << "," << (rep.reject ? "true" : "false") << "," << rep.scores << ","
              << rep.n << "," << rep.k << "\n";
  } else {
    std::cout << to_json(rep).dump(2) << "\n";
  }
  return 0;
}

struct SimArgs {
  std::string null_path, density = "gaussian", sigma, tau, orders, out;
  double nu = 0.0;
  int n = 500, burn_in = 500;
  std::uint64_t seed = 1;
};

int cmd_simulate(const SimArgs& a) {
  const VarmaSpec null = load_null(a.null_path, true);
  g_stage = "parsing options";
  if (a.n < 1) throw ConfigError("--n must be positive");
  if (a.burn_in < 0) throw ConfigError("--burn-in must be nonnegative");
  const RadialLaw law(RadialDensity::from_name(a.density, a.nu), null.k);
  Matrix sigma = Matrix::Identity(null.k, null.k);
  if (!a.sigma.empty()) {
    KeyValues kv;
    kv.set("sigma", a.sigma);
    sigma = kv.get_matrix("sigma", null.k, null.k);
  }
  VarmaSpec gen = null;
  if (!a.tau.empty()) {
    if (a.orders.empty()) throw ConfigError("--tau needs --alt-orders");
    const auto [p1, q1] = parse_orders(a.orders);
    const auto t = parse_list(a.tau);
    const Vector tau = Eigen::Map<const Vector>(t.data(), static_cast<Eigen::Index>(t.size()));
    if (tau.size() != null.k * null.k * (p1 + q1)) throw ConfigError("--tau must have k^2 (p1 + q1) entries");
    gen = perturb(null, p1, q1, tau, a.n);
    const RootCheckReport rep = check_roots(gen);
    if (!rep.passes) throw DomainError("perturbed model fails the stationarity/invertibility check: " + rep.summary());
  }
  g_stage = "simulating";
  CounterRng rng(a.seed, 0);
  const Series eps = sample_elliptical(law, sigma, a.n + a.burn_in, rng);
  const Series x = simulate(gen, eps, a.burn_in);
  if (a.out.empty()) {
    write_series_csv(std::cout, x);
  } else {
    std::ofstream f(a.out);
    if (!f) throw ConfigError("cannot write '" + a.out + "'");
    write_series_csv(f, x);
  }
  return 0;
}

struct AreArgs {
  std::string table, scores, density = "gaussian", ks;
  double nu = 0.0;
  int k = 2;
  bool check = false;
};

int cmd_are(const AreArgs& a) {
  g_stage = "computing efficiencies";
  if (a.table == "power-exponential") {
    std::vector<int> ks(reference::pe_k.begin(), reference::pe_k.end());
    std::vector<double> nus(reference::pe_nu.begin(), reference::pe_nu.end());
    const auto rows = power_exponential_table(ks, nus);
    std::cout << "k";
    for (double nu : nus) std::cout << ",nu=" << format_number(nu);
    std::cout << "\n";
    double worst = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::cout << rows[i].k;
      for (std::size_t j = 0; j < nus.size(); ++j) {
        std::cout << "," << cell(rows[i].values[j]);
        const double ref = reference::pe_values[i][j];
        if (std::isnan(ref) != std::isnan(rows[i].values[j])) worst = std::numeric_limits<double>::infinity();
        if (!std::isnan(ref)) worst = std::max(worst, std::abs(rows[i].values[j] - ref));
      }
      std::cout << "\n";
    }
    if (a.check) {
      std::cerr << "max deviation from printed values: " << format_number(worst) << " (tolerance 0.01)\n";
      return worst <= 0.01 ? 0 : 1;
    }
    return 0;
  }
  if (a.table == "spearman-bound") {
    std::vector<int> ks{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 50, 100, 200};
    if (!a.ks.empty()) {
      ks.clear();
      for (double v : parse_list(a.ks)) ks.push_back(static_cast<int>(v));
    }
    std::cout << "k,c_k,bound\n";
    for (int k : ks) std::cout << k << "," << format_number(find_ck(k)) << "," << format_number(spearman_lower_bound(k)) << "\n";
    if (a.check) {
      // only the requested dimensions that have a printed value
      double worst = 0.0;
      for (std::size_t i = 0; i < reference::sp_k.size(); ++i) {
        if (std::find(ks.begin(), ks.end(), reference::sp_k[i]) == ks.end()) continue;
        worst = std::max(worst, std::abs(spearman_lower_bound(reference::sp_k[i]) - reference::sp_values[i]));
      }
      std::cerr << "max deviation from printed values: " << format_number(worst) << " (tolerance 0.001)\n";
      return worst <= 0.001 ? 0 : 1;
    }
    return 0;
  }
  if (!a.table.empty()) throw ConfigError("unknown table '" + a.table + "'");
  if (a.scores.empty()) throw ConfigError("are needs --table or --scores");
  const RadialLaw law(RadialDensity::from_name(a.density, a.nu), a.k);
  const TestMethod m = parse_method(a.scores);
  nlohmann::json out;
  if (m.method == Method::adaptive) {
    out = {{"scores", "adaptive"}, {"density", law.density().name()}, {"k", a.k}, {"are", round12(are_adaptive(law))}};
  } else if (m.method == Method::gaussian) {
    out = {{"scores", "gaussian"}, {"density", law.density().name()}, {"k", a.k}, {"are", 1.0}};
  } else {
    out = to_json(are_fixed_score(method_scores(m, a.k), law));
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct McArgs {
  std::string config, format = "json", statistics;
  long long seed = -1, replications = -1;
  bool serial = false;
};

int cmd_mc(const McArgs& a) {
  g_stage = "reading experiment";
  KeyValues kv = KeyValues::read(a.config);
  if (a.seed >= 0) kv.set("seed", std::to_string(a.seed));
  if (a.replications > 0) kv.set("replications", std::to_string(a.replications));
  const Experiment exp = experiment_from_config(kv);
  g_stage = "running replications";
  const McSummary s = run_experiment(exp, a.serial ? Exec::serial : Exec::parallel);
  auto write_stats = [&](std::ostream& os) {
    os << "replication,stream,statistic\n";
    for (std::size_t r = 0; r < s.statistics.size(); ++r)
      os << r << "," << s.streams[r] << "," << cell(s.statistics[r]) << "\n";
  };
  if (!a.statistics.empty()) {
    std::ofstream f(a.statistics);
    if (!f) throw ConfigError("cannot write '" + a.statistics + "'");
    write_stats(f);
  }
  if (a.format == "csv")
    write_stats(std::cout);
  else
    std::cout << to_json(s).dump(2) << "\n";
  return 0;
}

struct DiagArgs {
  std::string null_path, orders, scores = "vdw", density = "gaussian", n_grid = "100,400,1600", lags = "1,2";
  double nu = 0.0;
  int n = 200, k = 2, instances = 20, replications = 200;
  std::uint64_t seed = 1;
  bool invariance = false, trend = false;
};

int cmd_diag(const DiagArgs& a) {
  if (a.invariance) {
    g_stage = "invariance suite";
    const auto checks = invariance_suite(a.seed, a.instances);
    std::cout << to_json(checks).dump(2) << "\n";
    for (const auto& c : checks)
      if (!c.pass) return 1;
    return 0;
  }
  if (a.trend) {
    g_stage = "representation trend";
    std::vector<int> grid, lags;
    for (double v : parse_list(a.n_grid)) grid.push_back(static_cast<int>(v));
    for (double v : parse_list(a.lags)) lags.push_back(static_cast<int>(v));
    const TestMethod m = parse_method(a.scores);
    const auto trend = representation_trend(RadialDensity::from_name(a.density, a.nu), Matrix::Identity(a.k, a.k),
                                            method_scores(m, a.k), lags, grid, a.replications, a.seed);
    std::cout << to_json(trend).dump(2) << "\n";
    return 0;
  }
  if (a.null_path.empty()) throw ConfigError("diag needs --null, --invariance or --trend");
  const VarmaSpec null = load_null(a.null_path, false);
  nlohmann::json out;
  out["root_check"] = to_json(check_roots(null));
  if (!a.orders.empty()) {
    g_stage = "building structural matrices";
    const auto [p1, q1] = parse_orders(a.orders);
    const StructuralSet ss = build_structural(null, p1, q1, a.n);
    out["orders"] = to_json(ss.orders);
    out["df"] = null.k * null.k * ss.orders.pi0();
    out["d_operator"] = {{"condition", round12(ss.d.condition)},
                         {"annihilation", round12(ss.d.annihilation)},
                         {"ill_conditioned", ss.d.ill_conditioned}};
    out["active_lags"] = ss.active_lags;
    out["j_condition_identity_scatter"] = round12(spd_condition(ss.J(Matrix::Identity(null.k, null.k))));
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank-based tests for VARMA serial dependence under elliptical innovations"};
  app.require_subcommand(1);

  TestArgs ta;
  auto* test = app.add_subcommand("test", "test a series against a null VARMA model");
  test->add_option("data", ta.data_path, "n x k CSV series")->required()->check(CLI::ExistingFile);
  test->add_option("--null", ta.null_path, "null model file")->required()->check(CLI::ExistingFile);
  test->add_option("--alt-orders", ta.orders, "p1,q1 (default p0+1,q0)");
  test->add_option("--scores", ta.scores, "sign|spearman|vdw|laplace|fscore:<density>[:<nu>]|adaptive|gaussian");
  test->add_option("--alpha", ta.alpha, "level");
  test->add_option("--lags", ta.lags, "full or a lag cut L");
  test->add_option("--kde-bandwidth", ta.bandwidth, "adaptive: auto or a log-scale kernel bandwidth");
  test->add_option("--tyler-tol", ta.tyler_tol);
  test->add_option("--tyler-max-iter", ta.tyler_max_iter);
  test->add_flag("--crosscov", ta.crosscov, "include the cross-covariance matrices in the report");
  test->add_option("--format", ta.format)->check(CLI::IsMember({"json", "csv"}));

  SimArgs sa;
  auto* sim = app.add_subcommand("simulate", "simulate a VARMA series with elliptical innovations");
  sim->add_option("--null", sa.null_path, "model file")->required()->check(CLI::ExistingFile);
  sim->add_option("--n", sa.n);
  sim->add_option("--seed", sa.seed);
  sim->add_option("--density", sa.density, "gaussian|laplace|student|power-exponential");
  sim->add_option("--nu", sa.nu, "density parameter");
  sim->add_option("--sigma", sa.sigma, "row-major scatter matrix");
  sim->add_option("--tau", sa.tau, "local shift, simulates under theta + n^{-1/2} tau");
  sim->add_option("--alt-orders", sa.orders, "p1,q1 of tau");
  sim->add_option("--burn-in", sa.burn_in);
  sim->add_option("-o,--output", sa.out);

  AreArgs aa;
  auto* are = app.add_subcommand("are", "asymptotic relative efficiencies");
  are->add_option("--table", aa.table)->check(CLI::IsMember({"power-exponential", "spearman-bound"}));
  are->add_flag("--check", aa.check, "compare against the printed values");
  are->add_option("--ks", aa.ks, "dimensions for the spearman-bound table");
  are->add_option("--scores", aa.scores);
  are->add_option("--density", aa.density);
  are->add_option("--nu", aa.nu);
  are->add_option("--k", aa.k);

  McArgs ma;
  auto* mc = app.add_subcommand("mc", "Monte Carlo size/power experiment");
  mc->add_option("--config", ma.config, "experiment file")->required()->check(CLI::ExistingFile);
  mc->add_option("--seed", ma.seed);
  mc->add_option("--replications", ma.replications);
  mc->add_option("--statistics", ma.statistics, "write per-replication statistics to this CSV");
  mc->add_option("--format", ma.format)->check(CLI::IsMember({"json", "csv"}));
  mc->add_flag("--serial", ma.serial);

  DiagArgs da;
  auto* diag = app.add_subcommand("diag", "model diagnostics and invariance checks");
  diag->add_option("--null", da.null_path)->check(CLI::ExistingFile);
  diag->add_option("--alt-orders", da.orders);
  diag->add_option("--n", da.n);
  diag->add_flag("--invariance", da.invariance);
  diag->add_option("--instances", da.instances);
  diag->add_flag("--trend", da.trend);
  diag->add_option("--scores", da.scores);
  diag->add_option("--density", da.density);
  diag->add_option("--nu", da.nu);
  diag->add_option("--k", da.k);
  diag->add_option("--n-grid", da.n_grid);
  diag->add_option("--lags", da.lags);
  diag->add_option("--replications", da.replications);
  diag->add_option("--seed", da.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInput;
  }

  try {
    if (*test) return cmd_test(ta);
    if (*sim) return cmd_simulate(sa);
    if (*are) return cmd_are(aa);
    if (*mc) return cmd_mc(ma);
    if (*diag) return cmd_diag(da);
  } catch (const ConfigError& e) {
    std::cerr << "error (" << g_stage << "): " << e.what() << "\n";
    return kInput;
  } catch (const DomainError& e) {
    std::cerr << "error (" << g_stage << "): " << e.what() << "\n";
    return kInput;
  } catch (const EstimationError& e) {
    std::cerr << "error (" << g_stage << "): " << e.what() << " [last residual " << format_number(e.residual()) << "]\n";
    return kNumeric;
  } catch (const Error& e) {
    std::cerr << "error (" << g_stage << "): " << e.what() << "\n";
    return kNumeric;
  }
  return 0;
}
