#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace rankvarma {

// Chi-square plumbing. Central forms go through the regularized incomplete gamma.
double chi2_cdf(double df, double x);
double chi2_sf(double df, double x);
double chi2_quantile(double df, double u);
// Upper quantile: the x with P(chi2_df > x) = alpha.
double chi2_critical(double df, double alpha);

// Noncentral chi-square upper tail via the Poisson mixture of central tails.
// Terms are summed outward from the Poisson mode until the untouched Poisson mass
// drops below tol; since every central tail is <= 1 that bounds the truncation error.
double noncentral_chi2_sf(double df, double lambda, double x, double tol = 1e-14);

// Rejection probability of the level-alpha chi-square test at noncentrality lambda.
double chi2_power(double df, double lambda, double alpha);
// Smallest lambda with chi2_power(df, lambda, alpha) = power.
double noncentrality_for_power(double df, double alpha, double power);

// Bessel function of the first kind J_mu(x) for mu >= 0, x >= 0.
// Ascending series while it is well conditioned, Miller backward recurrence otherwise.
double bessel_j(double mu, double x);

struct Quadrature {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive 61-point Gauss-Kronrod on [a, b]; b may be +infinity.
Quadrature integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-13, unsigned max_depth = 20);

// Root of a continuous f on [lo, hi] with f(lo), f(hi) of opposite sign.
double bracket_root(const std::function<double(double)>& f, double lo, double hi,
                    double x_tol = 1e-15);

// Inverse of a continuous increasing cdf on (0, inf) by safeguarded Newton steps
// inside an expanding bracket. pdf may be empty, in which case it bisects.
double invert_cdf(const std::function<double(double)>& cdf,
                  const std::function<double(double)>& pdf, double u, double guess = 1.0,
                  double u_tol = 1e-14);

// sup |F_n - F| for a sample against a continuous cdf.
double ks_distance(std::span<const double> sample, const std::function<double(double)>& cdf);
// Asymptotic Kolmogorov critical value for R observations at the 1% level.
double ks_critical_1pct(std::size_t R);

// Neumaier compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace rankvarma
