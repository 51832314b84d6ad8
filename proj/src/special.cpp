#include "rankvarma/special.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>

#include "rankvarma/errors.hpp"

namespace rankvarma {

namespace {

void require_df(double df) {
  if (!(df > 0.0) || !std::isfinite(df)) throw DomainError("chi-square degrees of freedom must be positive");
}

}  // namespace

double chi2_cdf(double df, double x) {
  require_df(df);
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(0.5 * df, 0.5 * x);
}

double chi2_sf(double df, double x) {
  require_df(df);
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

double chi2_quantile(double df, double u) {
  require_df(df);
  if (!(u > 0.0 && u < 1.0)) throw DomainError("chi-square quantile level must lie in (0,1)");
  return 2.0 * boost::math::gamma_p_inv(0.5 * df, u);
}

double chi2_critical(double df, double alpha) {
  require_df(df);
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
  return 2.0 * boost::math::gamma_q_inv(0.5 * df, alpha);
}

double noncentral_chi2_sf(double df, double lambda, double x, double tol) {
  require_df(df);
  if (!(lambda >= 0.0)) throw DomainError("noncentrality must be nonnegative");
  if (lambda == 0.0) return chi2_sf(df, x);
  if (x <= 0.0) return 1.0;
  const double h = 0.5 * lambda;
  const double lh = std::log(h);
  auto weight = [&](double j) { return std::exp(-h + j * lh - std::lgamma(j + 1.0)); };
  const long mode = static_cast<long>(std::floor(h));
  CompensatedSum total;
  double mass = 0.0;
  // Downward from the mode (inclusive).
  for (long j = mode; j >= 0; --j) {
    const double w = weight(static_cast<double>(j));
    total.add(w * boost::math::gamma_q(0.5 * df + j, 0.5 * x));
    mass += w;
    if (w < 1e-300) break;
  }
  for (long j = mode + 1;; ++j) {
    const double w = weight(static_cast<double>(j));
    total.add(w * boost::math::gamma_q(0.5 * df + j, 0.5 * x));
    mass += w;
    if (1.0 - mass < tol && w < tol) break;
    if (j - mode > 100000) throw NumericalError("noncentral chi-square series did not terminate");
  }
  return std::clamp(total.value(), 0.0, 1.0);
}

double chi2_power(double df, double lambda, double alpha) {
  return noncentral_chi2_sf(df, lambda, chi2_critical(df, alpha));
}

double noncentrality_for_power(double df, double alpha, double power) {
  if (!(power > alpha && power < 1.0)) throw DomainError("target power must lie in (alpha, 1)");
  auto g = [&](double lam) { return chi2_power(df, lam, alpha) - power; };
  double hi = 1.0;
  while (g(hi) < 0.0) hi *= 2.0;
  return bracket_root(g, 0.0, hi, 1e-13);
}

namespace {

// Ascending series. Returns false when cancellation has eaten too many digits.
bool bessel_series(double mu, double x, double& out) {
  const double half = 0.5 * x;
  const double q = half * half;
  double term = std::exp(mu * std::log(half) - std::lgamma(mu + 1.0));
  double sum = term;
  double abs_sum = std::abs(term);
  for (int m = 1; m < 500; ++m) {
    term *= -q / (m * (m + mu));
    sum += term;
    abs_sum += std::abs(term);
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  out = sum;
  return abs_sum <= 1e3 * std::abs(sum);
}

// Miller: recur J_{nu-1} = (2 nu / x) J_nu - J_{nu+1} downward from a large order,
// then normalize with (x/2)^mu / Gamma(mu+1) = J_mu + sum_k (mu+2k) r_k J_{mu+2k},
// r_k = Gamma(mu+k) / (k! Gamma(mu+1)).
double bessel_miller(double mu, double x) {
  const int N = 2 * (static_cast<int>(x + 30.0 + 12.0 * std::sqrt(x + 1.0)) / 2 + 1);
  std::vector<double> J(N + 2, 0.0);
  J[N + 1] = 0.0;
  J[N] = 1e-280;
  for (int j = N; j >= 1; --j) {
    J[j - 1] = 2.0 * (mu + j) / x * J[j] - J[j + 1];
    if (std::abs(J[j - 1]) > 1e250) {
      for (int i = j - 1; i <= N + 1; ++i) J[i] *= 1e-250;
    }
  }
  double norm = J[0];
  double r = 1.0;
  for (int k = 1; 2 * k <= N; ++k) {
    if (k > 1) r *= (mu + k - 1) / k;
    norm += (mu + 2.0 * k) * r * J[2 * k];
  }
  const double lhs = std::exp(mu * std::log(0.5 * x) - std::lgamma(mu + 1.0));
  return J[0] * lhs / norm;
}

}  // namespace

double bessel_j(double mu, double x) {
  if (!(mu >= 0.0) || !(x >= 0.0)) throw DomainError("bessel_j needs mu >= 0 and x >= 0");
  if (x == 0.0) return mu == 0.0 ? 1.0 : 0.0;
  double s = 0.0;
  if (x < 25.0 && bessel_series(mu, x, s)) return s;
  return bessel_miller(mu, x);
}

Quadrature integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                     unsigned max_depth) {
  Quadrature q;
  q.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, rel_tol,
                                                                          &q.error);
  if (!std::isfinite(q.value)) throw NumericalError("quadrature produced a non-finite value");
  return q;
}

double bracket_root(const std::function<double(double)>& f, double lo, double hi, double x_tol) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw NumericalError("root is not bracketed");
  boost::uintmax_t iters = 500;
  auto tol = [x_tol](double a, double b) { return std::abs(b - a) <= x_tol * std::max(1.0, std::abs(a)); };
  auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (r.first + r.second);
}

double invert_cdf(const std::function<double(double)>& cdf, const std::function<double(double)>& pdf,
                  double u, double guess, double u_tol) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile level must lie in (0,1)");
  double lo = 0.0, hi = std::max(guess, 1e-300);
  while (cdf(hi) < u) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw NumericalError("quantile bracket diverged");
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 400; ++it) {
    const double g = cdf(x) - u;
    if (std::abs(g) <= u_tol * std::min(u, 1.0 - u)) return x;
    if (g < 0.0)
      lo = x;
    else
      hi = x;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return x;
    double next = 0.5 * (lo + hi);
    if (pdf) {
      const double d = pdf(x);
      if (d > 0.0) {
        const double nx = x - g / d;
        if (nx > lo && nx < hi) next = nx;
      }
    }
    x = next;
  }
  return x;
}

double ks_distance(std::span<const double> sample, const std::function<double(double)>& cdf) {
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double F = cdf(s[i]);
    d = std::max({d, (i + 1) / n - F, F - i / n});
  }
  return d;
}

double ks_critical_1pct(std::size_t R) { return 1.62762 / std::sqrt(static_cast<double>(R)); }

}  // namespace rankvarma
