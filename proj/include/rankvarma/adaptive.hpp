#pragma once

#include <optional>
#include <vector>

#include "rankvarma/teststat.hpp"

namespace rankvarma {

// Gaussian-kernel estimate of the radial law, built on y = log d:
//   g(y) = (nh)^{-1} sum phi((y - y_i)/h),  f_k(r) = g(log r)/r,  F_k(r) = G(log r),
// and the estimated radial score phi(r) = (k - g'(y)/g(y))/r. Kernel sums are cut at
// |y - y_i| > 8.5h, where the Gaussian weight is below double rounding.
//
// g'/g is taken at a wider bandwidth h n^{2/35} (the n^{-1/7} rate suited to a first
// derivative); at the density rate the ratio is too noisy near r = 0, where it is divided by r.
class RadialDensityEstimate {
 public:
  // bandwidth (on the log scale) defaults to 0.9 min(sd, IQR/1.34) n^{-1/5}.
  static RadialDensityEstimate fit(const Vector& distances, int k, std::optional<double> bandwidth = std::nullopt);

  int dim() const { return k_; }
  double bandwidth() const { return h_; }
  double score_bandwidth() const { return hd_; }

  double pdf(double r) const;
  double cdf(double r) const;
  double score(double r) const;
  double quantile(double u) const;

  // Same density type, rescaled: r -> a f(a r).
  RadialDensityEstimate rescaled(double a) const;

  struct Table {
    Vector k1;  // phi o F^{-1} at t/(n+1)
    Vector k2;  // F^{-1} at t/(n+1)
    double info = 0.0;  // mean of k1^2
    double v = 0.0;     // mean of k2^2
    double trim = 0.0;  // k1 is held flat below trim and above 1 - trim

    Table rescaled(double a) const;  // the table of est.rescaled(a)
  };
  // Scores on the grid t/(n+1), t = 1..n (n = sample size unless given). k1 is
  // trimmed: outside [n^{-1/3}, 1 - n^{-1/3}] it takes the value at the nearest inside point.
  Table table(int n = -1) const;
  static double score_trim(int n);

  // Rescaled so that the grid mean of (F^{-1})^2 equals target (1 by default).
  RadialDensityEstimate normalized(double target = 1.0) const;

 private:
  // log g at y (data coordinates) and g'/g.
  void kernel_sums(double y, double h, double* log_g, double* dlog_g) const;
  double big_g(double y) const;  // kernel cdf at y
  double level(double y, double* dens) const;  // big_g and the density in one pass

  int k_ = 1;
  double h_ = 1.0;
  double hd_ = 1.0;  // bandwidth for g'/g
  double shift_ = 0.0;   // data coordinate = log r + shift
  std::vector<double> y_;  // sorted log distances
};

// Estimated-score cross-covariances from Tyler ranks and residuals.
CrossCovSeq adaptive_crosscov_all(const RadialDensityEstimate::Table& tab, const RankedResiduals& rr,
                                  const TylerFit& fit, int max_lag, Exec exec = Exec::parallel);
Matrix adaptive_crosscov(const RadialDensityEstimate& est, const RankedResiduals& rr, const TylerFit& fit, int lag);
// Known-scatter version: true radii and directions, density estimated from the true radii.
Matrix adaptive_crosscov_oracle(const Matrix& sigma, const Series& z, int lag,
                                std::optional<double> bandwidth = std::nullopt);

QuadraticPieces adaptive_pieces(const StructuralSet& ss, const Series& z, const TestOptions& opt,
                                Diagnostics* diag = nullptr);
TestReport statistic_adaptive(const StructuralSet& ss, const Series& z, const TestOptions& opt = {});
TestReport statistic_adaptive(const Series& x, const VarmaSpec& null, int p1, int q1, const TestOptions& opt = {});

}  // namespace rankvarma
