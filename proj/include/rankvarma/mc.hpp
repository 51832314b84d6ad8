#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rankvarma/teststat.hpp"

namespace rankvarma {

struct Experiment {
  VarmaSpec null;
  int p1 = 0, q1 = 0;
  RadialDensity law = RadialDensity::gaussian();
  Matrix sigma;  // innovation scatter; identity when empty
  TestMethod method;
  int n = 200;
  int replications = 1000;
  double alpha = 0.05;
  std::optional<Vector> tau;  // data drawn under null + n^{-1/2} tau
  std::uint64_t seed = 1;
  int burn_in = 500;       // 0: zero-initial control arm
  int max_lag = -1;
  bool oracle_sigma = false;  // J from the true scatter

  void validate() const;
};

struct McSummary {
  int replications = 0;
  int failures = 0;
  int rejections = 0;
  double rejection_rate = 0.0;
  double ci_low = 0.0, ci_high = 0.0;  // rate +- 3 binomial standard errors, clipped to [0,1]
  int df = 0;
  double noncentrality = 0.0;
  double predicted_power = 0.0;
  double ks_distance = 0.0;
  double ks_critical = 0.0;
  std::vector<double> statistics;       // NaN for failed replications
  std::vector<std::uint64_t> streams;   // stream id of each replication under the master seed
  std::vector<std::string> errors;      // first few failure messages
};

// Replication r draws from CounterRng(seed, r), so the summary does not depend on the
// thread count. exec = serial runs the same loop without OpenMP.
McSummary run_experiment(const Experiment& exp, Exec exec = Exec::parallel);

// One replication's innovations and series (exposed for tests and the CLI).
Series draw_series(const Experiment& exp, std::uint64_t stream);

struct TrendPoint {
  int n = 0;
  double median = 0.0;  // median over replications of sqrt(n) |vec(rank - oracle)|
};
struct TrendReport {
  int lag = 1;
  std::vector<TrendPoint> points;
  double slope = 0.0;  // least-squares slope of log median on log n
  bool excluded = false;  // lag too close to n for a meaningful average
};

// Gap between rank-based and population-score cross-covariances across an n grid.
std::vector<TrendReport> representation_trend(const RadialDensity& law, const Matrix& sigma, const ScorePair& scores,
                                              const std::vector<int>& lags, const std::vector<int>& n_grid,
                                              int replications, std::uint64_t seed);

struct InvarianceCheck {
  std::string name;
  double max_deviation = 0.0;
  double threshold = 0.0;
  bool judged = true;  // false: deviation recorded only
  bool pass = true;
};

// Randomized exact-invariance checks of the rank statistic.
std::vector<InvarianceCheck> invariance_suite(std::uint64_t seed, int instances = 20);

}  // namespace rankvarma
