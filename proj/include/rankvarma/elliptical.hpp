#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rankvarma/rng.hpp"
#include "rankvarma/types.hpp"

namespace rankvarma {

enum class Family { gaussian, laplace, student, power_exponential, tabulated };

// Radial density generator f, up to scale. Immutable descriptor; the k-dimensional
// radial law built from it lives in RadialLaw.
class RadialDensity {
 public:
  static RadialDensity gaussian();
  static RadialDensity laplace();
  static RadialDensity student(double dof);
  static RadialDensity power_exponential(double nu);
  // Nodes r must be strictly increasing and nonnegative, f strictly positive. Log-linear
  // interpolation in between, flat below the first node, and the last log-slope
  // continued beyond the last node (it has to be negative).
  static RadialDensity tabulated(std::vector<double> r, std::vector<double> f);

  // "gaussian", "laplace", "student", "power-exponential".
  static RadialDensity from_name(const std::string& name, double param = 0.0);

  Family family() const { return family_; }
  double parameter() const { return param_; }
  std::string name() const;
  bool differentiable() const { return family_ != Family::tabulated; }

  const std::vector<double>& nodes() const { return r_; }
  const std::vector<double>& log_values() const { return logf_; }

 private:
  RadialDensity(Family fam, double p) : family_(fam), param_(p) {}
  Family family_;
  double param_;
  std::vector<double> r_, logf_;
};

// f together with the dimension k.
class RadialLaw {
 public:
  RadialLaw(RadialDensity density, int k);

  const RadialDensity& density() const { return density_; }
  int dim() const { return k_; }

  // log f(r); depends on k for the student and power-exponential generators.
  double log_f(double r) const;
  // phi_f(r) = -f'(r)/f(r).
  double phi(double r) const;

  double pdf(double r) const;
  double log_pdf(double r) const;
  double cdf(double r) const;
  double sf(double r) const;
  double quantile(double u) const;
  // Radius with sf(r) = s, accurate for tiny s.
  double quantile_upper(double s) const;

  // mu_l = int_0^inf r^l f(r) dr; +inf if it diverges.
  double moment(double l) const;
  bool moment_finite(double l) const;
  // E[d^2] = mu_{k+1} / mu_{k-1}.
  double mean_square() const;
  // E[phi(d)^2].
  double fisher_information() const;
  // E[d phi(d)]; equals k whenever boundary terms vanish.
  double mean_d_phi() const;
  double sphere_measure() const;
  double normalizer() const;

  // E[g(d)], integrated over log r and split at a few quantiles so heavy tails are
  // handled without a change of variables per family.
  double expect(const std::function<double(double)>& g, double rel_tol = 1e-13) const;

  // Power-exponential scale constant c0 (1 for other families).
  double c0() const { return c0_; }

 private:
  double tab_segment_integral(std::size_t seg, double a, double b, double l) const;
  double tab_tail_integral(double from, double l) const;
  double tab_cdf_unnormalized(double r) const;
  double log_moment(double l) const;

  RadialDensity density_;
  int k_;
  double c0_ = 1.0;
  double log_mu_km1_ = 0.0;  // log mu_{k-1}
  std::vector<double> tab_cum_;  // cumulative r^{k-1} f mass at each node
  double tab_total_ = 0.0;
  double fisher_ = 0.0;
};

double sphere_measure(int k);

// n draws of F^{-1}(U) Sigma^{1/2} u, with u uniform on the sphere. Returned k x n.
Series sample_elliptical(const RadialLaw& law, const Matrix& sigma, int n, CounterRng& rng);

}  // namespace rankvarma
