#include "rankvarma/mc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rankvarma/errors.hpp"
#include "rankvarma/linalg.hpp"
#include "rankvarma/rng.hpp"
#include "rankvarma/special.hpp"

namespace rankvarma {

namespace {

Matrix scatter_of(const Experiment& exp) {
  return exp.sigma.size() == 0 ? Matrix::Identity(exp.null.k, exp.null.k) : exp.sigma;
}

VarmaSpec generating_spec(const Experiment& exp) {
  if (!exp.tau) return exp.null;
  return perturb(exp.null, exp.p1, exp.q1, *exp.tau, exp.n);
}

}  // namespace

void Experiment::validate() const {
  null.validate();
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (n < 2) throw ConfigError("n must be >= 2");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
  if (burn_in < 0) throw ConfigError("burn_in must be >= 0");
  if (sigma.size() != 0) {
    if (sigma.rows() != null.k || sigma.cols() != null.k) throw ConfigError("sigma must be k x k");
    require_spd(sigma, "sigma");
  }
  make_orders(null, p1, q1);
  if (tau) {
    const Eigen::Index want = static_cast<Eigen::Index>(null.k) * null.k * (p1 + q1);
    if (tau->size() != want) throw ConfigError("tau must have length k^2 (p1 + q1) = " + std::to_string(want));
    const RootCheckReport rep = check_roots(perturb(null, p1, q1, *tau, n));
    if (!rep.passes) throw DomainError("perturbed model fails the stationarity/invertibility check: " + rep.summary());
  }
}

Series draw_series(const Experiment& exp, std::uint64_t stream) {
  CounterRng rng(exp.seed, stream);
  const RadialLaw law(exp.law, exp.null.k);
  const Series eps = sample_elliptical(law, scatter_of(exp), exp.n + exp.burn_in, rng);
  return simulate(generating_spec(exp), eps, exp.burn_in);
}

McSummary run_experiment(const Experiment& exp, Exec exec) {
  exp.validate();
  const int k = exp.null.k, reps = exp.replications;
  const Matrix sigma = scatter_of(exp);
  const StructuralSet ss = build_structural(exp.null, exp.p1, exp.q1, exp.n);
  const RadialLaw law(exp.law, k);
  const VarmaSpec gen = generating_spec(exp);

  McSummary out;
  out.replications = reps;
  out.df = k * k * ss.orders.pi0();
  if (exp.tau && exp.tau->squaredNorm() > 0.0) out.noncentrality = noncentrality_for(exp.method, *exp.tau, ss.N(sigma), law);
  out.predicted_power = chi2_power(out.df, out.noncentrality, exp.alpha);

  TestOptions opt;
  opt.alpha = exp.alpha;
  opt.max_lag = exp.max_lag;
  opt.exec = Exec::serial;  // parallelism lives at the replication level
  if (exp.oracle_sigma) opt.known_sigma = sigma;

  out.statistics.assign(reps, std::numeric_limits<double>::quiet_NaN());
  out.streams.resize(reps);
  std::vector<char> reject(reps, 0);
  std::vector<std::string> message(reps);

  auto one = [&](int r) {
    out.streams[r] = static_cast<std::uint64_t>(r);
    try {
      CounterRng rng(exp.seed, static_cast<std::uint64_t>(r));
      const Series eps = sample_elliptical(law, sigma, exp.n + exp.burn_in, rng);
      const Series x = simulate(gen, eps, exp.burn_in);
      const TestReport rep = run_test(ss, residuals(exp.null, x), exp.method, opt);
      out.statistics[r] = rep.statistic;
      reject[r] = rep.reject ? 1 : 0;
    } catch (const std::exception& e) {
      message[r] = e.what();
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (int r = 0; r < reps; ++r) one(r);
  } else {
    for (int r = 0; r < reps; ++r) one(r);
  }

  std::vector<double> ok;
  ok.reserve(reps);
  for (int r = 0; r < reps; ++r) {
    if (std::isnan(out.statistics[r])) {
      ++out.failures;
      if (out.errors.size() < 5) out.errors.push_back("replication " + std::to_string(r) + ": " + message[r]);
      continue;
    }
    ok.push_back(out.statistics[r]);
    out.rejections += reject[r];
  }
  const double m = static_cast<double>(ok.size());
  if (ok.empty()) return out;
  out.rejection_rate = out.rejections / m;
  const double se = std::sqrt(out.rejection_rate * (1.0 - out.rejection_rate) / m);
  out.ci_low = std::max(0.0, out.rejection_rate - 3.0 * se);
  out.ci_high = std::min(1.0, out.rejection_rate + 3.0 * se);
  const double df = out.df, lambda = out.noncentrality;
  if (lambda > 0.0)
    out.ks_distance = ks_distance(ok, [&](double x) { return 1.0 - noncentral_chi2_sf(df, lambda, x); });
  else
    out.ks_distance = ks_distance(ok, [&](double x) { return chi2_cdf(df, x); });
  out.ks_critical = ks_critical_1pct(ok.size());
  return out;
}

std::vector<TrendReport> representation_trend(const RadialDensity& density, const Matrix& sigma, const ScorePair& scores,
                                              const std::vector<int>& lags, const std::vector<int>& n_grid,
                                              int replications, std::uint64_t seed) {
  if (replications < 1) throw ConfigError("replications must be >= 1");
  const int k = static_cast<int>(sigma.rows());
  const RadialLaw law(density, k);
  std::vector<TrendReport> out;
  for (int lag : lags) {
    TrendReport tr;
    tr.lag = lag;
    std::vector<double> lx, ly;
    for (std::size_t g = 0; g < n_grid.size(); ++g) {
      const int n = n_grid[g];
      if (lag >= n - 2) {
        // one or two products only: nothing to average
        tr.excluded = true;
        continue;
      }
      std::vector<double> gaps(replications);
#pragma omp parallel for schedule(dynamic)
      for (int r = 0; r < replications; ++r) {
        CounterRng rng(seed, (static_cast<std::uint64_t>(g) << 32) | static_cast<std::uint64_t>(r));
        const Series z = sample_elliptical(law, sigma, n, rng);
        const TylerFit fit = tyler_fit(z);
        const RankedResiduals rr = tyler_residuals(fit, z);
        const Matrix diff = rank_crosscov(scores, rr, fit, lag) - score_crosscov_oracle(scores, law, sigma, z, lag);
        gaps[r] = std::sqrt(static_cast<double>(n)) * diff.norm();
      }
      std::nth_element(gaps.begin(), gaps.begin() + replications / 2, gaps.end());
      double med = gaps[replications / 2];
      if (replications % 2 == 0) {
        med = 0.5 * (med + *std::max_element(gaps.begin(), gaps.begin() + replications / 2));
      }
      tr.points.push_back({n, med});
      lx.push_back(std::log(static_cast<double>(n)));
      ly.push_back(std::log(med));
    }
    if (lx.size() >= 2) {
      const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
      const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
      double sxy = 0.0, sxx = 0.0;
      for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
      }
      tr.slope = sxy / sxx;
    }
    out.push_back(std::move(tr));
  }
  return out;
}

namespace {

Matrix random_matrix(CounterRng& rng, int rows, int cols, double scale) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = scale * (2.0 * rng.uniform() - 1.0);
  return m;
}

Matrix random_invertible(CounterRng& rng, int k) {
  for (;;) {
    Matrix m = random_matrix(rng, k, k, 1.0) + Matrix::Identity(k, k);
    if (condition_number(m) < 50.0) return m;
  }
}

VarmaSpec random_var1(CounterRng& rng, int k) {
  for (;;) {
    VarmaSpec s;
    s.k = k;
    s.ar = {random_matrix(rng, k, k, 0.4)};
    if (check_roots(s).passes) return s;
  }
}

Series draw_var(const VarmaSpec& spec, int n, CounterRng& rng) {
  const RadialLaw law(RadialDensity::student(3.0), spec.k);
  return simulate(spec, sample_elliptical(law, Matrix::Identity(spec.k, spec.k), n + 100, rng), 100);
}

double rel_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }

void record(InvarianceCheck& c, double dev) { c.max_deviation = std::max(c.max_deviation, dev); }

}  // namespace

std::vector<InvarianceCheck> invariance_suite(std::uint64_t seed, int instances) {
  InvarianceCheck radial{"monotone_radial", 0.0, 1e-10};
  InvarianceCheck affine{"scalar_null_affine", 0.0, 1e-8};
  InvarianceCheck fundamental{"fundamental_system", 0.0, 1e-8};
  InvarianceCheck pinv{"pseudo_inverse_form", 0.0, 1e-8};
  InvarianceCheck through_pi{"orders_through_pi", 0.0, 0.0};
  InvarianceCheck nonscalar{"nonscalar_null_affine", 0.0, 0.0, false};
  const int n = 200;
  TestOptions opt;
  opt.exec = Exec::serial;

  for (int inst = 0; inst < instances; ++inst) {
    CounterRng rng(seed, static_cast<std::uint64_t>(inst));
    const int k = 2 + inst % 2;
    const ScorePair scores = make_score_pair(inst % 3 == 0 ? ScoreKind::van_der_waerden : ScoreKind::spearman, k);

    // Radial transform d -> d^3 applied in the Tyler metric.
    {
      const VarmaSpec null = random_var1(rng, k);
      const Series z = residuals(null, draw_var(null, n, rng));
      const StructuralSet ss = build_structural(null, 2, 0, n);
      const RankedResiduals rr = tyler_residuals(tyler_fit(z), z);
      Series z3 = z;
      for (int t = 0; t < n; ++t) z3.col(t) *= rr.d(t) * rr.d(t);
      record(radial, rel_gap(statistic_qk(ss, z, scores, opt).statistic, statistic_qk(ss, z3, scores, opt).statistic));

      // Canonical vs random-lambda fundamental system.
      const Matrix lambda = random_invertible(rng, k * k * ss.orders.s());
      const StructuralSet ss_l = build_structural(null, 2, 0, n, lambda);
      record(fundamental, rel_gap(statistic_qk(ss, z, scores, opt).statistic, statistic_qk(ss_l, z, scores, opt).statistic));

      // Generalized-inverse form over the full (p1, q1) parameter.
      Diagnostics diag;
      const QuadraticPieces qp = rank_pieces(ss, z, scores, opt, &diag);
      const Matrix pm = ss.P * ss.M;
      const Vector v = pm.transpose() * qp.u;
      const Matrix g = pm.transpose() * qp.j * pm;
      const double alt = qp.factor * v.dot(pseudo_inverse(g) * v);
      record(pinv, rel_gap(quadratic_form(qp), alt));

      // Non-scalar null under a random linear map: recorded only.
      const Matrix m = random_invertible(rng, k);
      const Series x = draw_var(null, n, rng);
      const Series mx = m * x;
      record(nonscalar, rel_gap(statistic_qk(x, null, 2, 0, scores, opt).statistic,
                                statistic_qk(mx, null, 2, 0, scores, opt).statistic));
    }

    // Scalar null: A_1 = a I, B_1 = b I.
    {
      VarmaSpec null;
      null.k = k;
      null.ar = {(0.8 * rng.uniform() - 0.4) * Matrix::Identity(k, k)};
      null.ma = {(0.8 * rng.uniform() - 0.4) * Matrix::Identity(k, k)};
      const Matrix m = random_invertible(rng, k);
      const Series x = draw_var(null, n, rng);
      const Series mx = m * x;
      record(affine, rel_gap(statistic_qk(x, null, 2, 1, scores, opt).statistic,
                             statistic_qk(mx, null, 2, 1, scores, opt).statistic));

      // (2,1) and (1,2) share pi = 1.
      const Series z = residuals(null, x);
      const double a = statistic_qk(build_structural(null, 2, 1, n), z, scores, opt).statistic;
      const double b = statistic_qk(build_structural(null, 1, 2, n), z, scores, opt).statistic;
      record(through_pi, std::abs(a - b));
    }
  }

  std::vector<InvarianceCheck> out{radial, affine, fundamental, pinv, through_pi, nonscalar};
  for (auto& c : out) c.pass = !c.judged || c.max_deviation <= c.threshold;
  return out;
}

}  // namespace rankvarma
