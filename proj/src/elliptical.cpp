#include "rankvarma/elliptical.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "rankvarma/errors.hpp"
#include "rankvarma/linalg.hpp"
#include "rankvarma/special.hpp"

namespace rankvarma {

namespace bm = boost::math;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

RadialDensity RadialDensity::gaussian() { return {Family::gaussian, 0.0}; }
RadialDensity RadialDensity::laplace() { return {Family::laplace, 0.0}; }

RadialDensity RadialDensity::student(double dof) {
  if (!(dof > 0.0) || !std::isfinite(dof)) throw DomainError("student degrees of freedom must be positive");
  return {Family::student, dof};
}

RadialDensity RadialDensity::power_exponential(double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("power-exponential tail index must be positive");
  return {Family::power_exponential, nu};
}

RadialDensity RadialDensity::tabulated(std::vector<double> r, std::vector<double> f) {
  if (r.size() < 2 || r.size() != f.size()) throw ConfigError("tabulated density needs >= 2 matching nodes");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] >= 0.0) || !std::isfinite(r[i])) throw ConfigError("tabulated radii must be finite and >= 0");
    if (i > 0 && !(r[i] > r[i - 1])) throw ConfigError("tabulated radii must be strictly increasing");
    if (!(f[i] > 0.0) || !std::isfinite(f[i])) throw ConfigError("tabulated density values must be positive");
  }
  RadialDensity d(Family::tabulated, 0.0);
  d.r_ = std::move(r);
  d.logf_.resize(f.size());
  std::transform(f.begin(), f.end(), d.logf_.begin(), [](double v) { return std::log(v); });
  const std::size_t m = d.r_.size() - 1;
  const double slope = (d.logf_[m] - d.logf_[m - 1]) / (d.r_[m] - d.r_[m - 1]);
  if (!(slope < 0.0)) throw ConfigError("tabulated density is not normalizable: last log-slope must be negative");
  return d;
}

RadialDensity RadialDensity::from_name(const std::string& name, double param) {
  if (name == "gaussian" || name == "normal") return gaussian();
  if (name == "laplace" || name == "laplace-exponential" || name == "double-exponential") return laplace();
  if (name == "student" || name == "t") return student(param);
  if (name == "power-exponential" || name == "powexp") return power_exponential(param);
  throw ConfigError("unknown density family '" + name + "'");
}

std::string RadialDensity::name() const {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return std::string(buf);
  };
  switch (family_) {
    case Family::gaussian: return "gaussian";
    case Family::laplace: return "laplace";
    case Family::student: return "student(" + num(param_) + ")";
    case Family::power_exponential: return "power-exponential(" + num(param_) + ")";
    case Family::tabulated: return "tabulated";
  }
  return "?";
}

double sphere_measure(int k) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k);
}

RadialLaw::RadialLaw(RadialDensity density, int k) : density_(std::move(density)), k_(k) {
  if (k < 1) throw DomainError("dimension k must be >= 1");
  if (density_.family() == Family::power_exponential) {
    const double nu = density_.parameter();
    c0_ = std::exp(std::log(static_cast<double>(k)) + std::lgamma(k / (2.0 * nu)) -
                   std::lgamma((k + 2.0) / (2.0 * nu)));
  }
  if (density_.family() == Family::tabulated) {
    const auto& r = density_.nodes();
    const auto& lf = density_.log_values();
    tab_cum_.assign(r.size(), 0.0);
    tab_cum_[0] = std::exp(lf[0]) * std::pow(r[0], k) / k;
    for (std::size_t i = 0; i + 1 < r.size(); ++i)
      tab_cum_[i + 1] = tab_cum_[i] + tab_segment_integral(i, r[i], r[i + 1], k - 1);
    tab_total_ = tab_cum_.back() + tab_tail_integral(r.back(), k - 1);
    if (!(tab_total_ > 0.0) || !std::isfinite(tab_total_))
      throw ConfigError("tabulated density is not normalizable in dimension " + std::to_string(k));
    log_mu_km1_ = std::log(tab_total_);
  } else {
    log_mu_km1_ = log_moment(k - 1);
  }
  switch (density_.family()) {
    case Family::gaussian: fisher_ = k; break;
    case Family::laplace: fisher_ = 1.0; break;
    case Family::tabulated: fisher_ = std::numeric_limits<double>::quiet_NaN(); break;
    case Family::power_exponential:
      if (4.0 * density_.parameter() + k - 2.0 <= 0.0) {
        fisher_ = kInf;
        break;
      }
      [[fallthrough]];
    case Family::student: {
      fisher_ = expect([this](double r) {
        const double p = phi(r);
        return p * p;
      });
      break;
    }
  }
}

double RadialLaw::log_f(double r) const {
  switch (density_.family()) {
    case Family::gaussian: return -0.5 * r * r;
    case Family::laplace: return -r;
    case Family::student: {
      const double nu = density_.parameter();
      return -0.5 * (nu + k_) * std::log1p(r * r / nu);
    }
    case Family::power_exponential: return -std::pow(r * r / c0_, density_.parameter());
    case Family::tabulated: {
      const auto& n = density_.nodes();
      const auto& lf = density_.log_values();
      if (r <= n.front()) return lf.front();
      const std::size_t m = n.size() - 1;
      std::size_t i;
      if (r >= n[m]) {
        i = m - 1;
      } else {
        i = static_cast<std::size_t>(std::upper_bound(n.begin(), n.end(), r) - n.begin()) - 1;
      }
      const double slope = (lf[i + 1] - lf[i]) / (n[i + 1] - n[i]);
      return lf[i] + slope * (r - n[i]);
    }
  }
  return 0.0;
}

double RadialLaw::phi(double r) const {
  switch (density_.family()) {
    case Family::gaussian: return r;
    case Family::laplace: return 1.0;
    case Family::student: {
      const double nu = density_.parameter();
      return (nu + k_) * r / (nu + r * r);
    }
    case Family::power_exponential: {
      const double nu = density_.parameter();
      return 2.0 * nu * std::pow(r, 2.0 * nu - 1.0) / std::pow(c0_, nu);
    }
    case Family::tabulated: break;
  }
  throw UnsupportedError("score function is not available for a tabulated density");
}

double RadialLaw::log_pdf(double r) const {
  if (!(r > 0.0)) return -kInf;
  if (std::isinf(r)) return -kInf;
  return (k_ - 1) * std::log(r) + log_f(r) - log_mu_km1_;
}

double RadialLaw::pdf(double r) const {
  if (r < 0.0) throw DomainError("radius must be nonnegative");
  return std::exp(log_pdf(r));
}

double RadialLaw::tab_segment_integral(std::size_t, double a, double b, double l) const {
  if (b <= a) return 0.0;
  auto g = [&](double r) { return std::exp(l * std::log(r) + log_f(r)); };
  return integrate(g, a, b, 1e-12).value;
}

double RadialLaw::tab_tail_integral(double from, double l) const {
  // log f = a + s r on [from, inf): int r^l e^{a + s r} dr = e^a (-s)^{-(l+1)} Gamma(l+1, -s from).
  const auto& n = density_.nodes();
  const auto& lf = density_.log_values();
  const std::size_t m = n.size() - 1;
  const double s = (lf[m] - lf[m - 1]) / (n[m] - n[m - 1]);
  const double a = lf[m] - s * n[m];
  const double x = -s * from;
  return std::exp(a - (l + 1.0) * std::log(-s)) * bm::tgamma(l + 1.0, x);
}

double RadialLaw::tab_cdf_unnormalized(double r) const {
  const auto& n = density_.nodes();
  if (r <= n.front()) return std::exp(density_.log_values().front()) * std::pow(r, k_) / k_;
  if (r >= n.back()) return tab_total_ - tab_tail_integral(r, k_ - 1);
  const std::size_t i = static_cast<std::size_t>(std::upper_bound(n.begin(), n.end(), r) - n.begin()) - 1;
  return tab_cum_[i] + tab_segment_integral(i, n[i], r, k_ - 1);
}

double RadialLaw::cdf(double r) const {
  if (r < 0.0) throw DomainError("radius must be nonnegative");
  if (r == 0.0) return 0.0;
  if (std::isinf(r)) return 1.0;
  const double k = k_;
  switch (density_.family()) {
    case Family::gaussian: return bm::gamma_p(0.5 * k, 0.5 * r * r);
    case Family::laplace: return bm::gamma_p(k, r);
    case Family::student: {
      const double nu = density_.parameter();
      const double r2 = r * r;
      if (r2 < nu) return bm::ibeta(0.5 * k, 0.5 * nu, r2 / (r2 + nu));
      return bm::ibetac(0.5 * nu, 0.5 * k, nu / (r2 + nu));
    }
    case Family::power_exponential: {
      const double nu = density_.parameter();
      return bm::gamma_p(k / (2.0 * nu), std::pow(r * r / c0_, nu));
    }
    case Family::tabulated: return std::clamp(tab_cdf_unnormalized(r) / tab_total_, 0.0, 1.0);
  }
  return 0.0;
}

double RadialLaw::sf(double r) const {
  if (r < 0.0) throw DomainError("radius must be nonnegative");
  if (r == 0.0) return 1.0;
  if (std::isinf(r)) return 0.0;
  const double k = k_;
  switch (density_.family()) {
    case Family::gaussian: return bm::gamma_q(0.5 * k, 0.5 * r * r);
    case Family::laplace: return bm::gamma_q(k, r);
    case Family::student: {
      const double nu = density_.parameter();
      const double r2 = r * r;
      if (r2 < nu) return bm::ibetac(0.5 * k, 0.5 * nu, r2 / (r2 + nu));
      return bm::ibeta(0.5 * nu, 0.5 * k, nu / (r2 + nu));
    }
    case Family::power_exponential: {
      const double nu = density_.parameter();
      return bm::gamma_q(k / (2.0 * nu), std::pow(r * r / c0_, nu));
    }
    case Family::tabulated: {
      const auto& n = density_.nodes();
      if (r >= n.back()) return tab_tail_integral(r, k_ - 1) / tab_total_;
      return std::clamp(1.0 - cdf(r), 0.0, 1.0);
    }
  }
  return 0.0;
}

namespace {

// Student radius from the lower (u) or upper (s = 1-u) tail probability.
double student_radius(double k, double nu, double u, double s) {
  if (u <= 0.5) {
    const double x = bm::ibeta_inv(0.5 * k, 0.5 * nu, u);
    return std::sqrt(nu * x / (1.0 - x));
  }
  const double y = bm::ibeta_inv(0.5 * nu, 0.5 * k, s);
  return std::sqrt(nu * (1.0 - y) / y);
}

}  // namespace

double RadialLaw::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile level must lie in (0,1)");
  const double k = k_;
  switch (density_.family()) {
    case Family::gaussian: return std::sqrt(2.0 * bm::gamma_p_inv(0.5 * k, u));
    case Family::laplace: return bm::gamma_p_inv(k, u);
    case Family::student: return student_radius(k, density_.parameter(), u, 1.0 - u);
    case Family::power_exponential: {
      const double nu = density_.parameter();
      const double s = bm::gamma_p_inv(k / (2.0 * nu), u);
      return std::sqrt(c0_ * std::pow(s, 1.0 / nu));
    }
    case Family::tabulated: {
      const double guess = density_.nodes().back() > 0 ? density_.nodes().back() : 1.0;
      return invert_cdf([this](double r) { return cdf(r); }, [this](double r) { return pdf(r); }, u, guess);
    }
  }
  return 0.0;
}

double RadialLaw::quantile_upper(double s) const {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("tail probability must lie in (0,1)");
  const double k = k_;
  switch (density_.family()) {
    case Family::gaussian: return std::sqrt(2.0 * bm::gamma_q_inv(0.5 * k, s));
    case Family::laplace: return bm::gamma_q_inv(k, s);
    case Family::student: return student_radius(k, density_.parameter(), 1.0 - s, s);
    case Family::power_exponential: {
      const double nu = density_.parameter();
      const double t = bm::gamma_q_inv(k / (2.0 * nu), s);
      return std::sqrt(c0_ * std::pow(t, 1.0 / nu));
    }
    case Family::tabulated: {
      if (s >= 0.5) return quantile(1.0 - s);
      const double guess = density_.nodes().back() > 0 ? density_.nodes().back() : 1.0;
      // Solve on the survival scale: 1 - sf is increasing.
      auto up = [this, s](double r) { return s - sf(r) + 0.5; };
      return invert_cdf(up, [this](double r) { return pdf(r); }, 0.5, guess);
    }
  }
  return 0.0;
}

double RadialLaw::log_moment(double l) const {
  const double k = k_;
  switch (density_.family()) {
    case Family::gaussian: return 0.5 * (l - 1.0) * std::log(2.0) + std::lgamma(0.5 * (l + 1.0));
    case Family::laplace: return std::lgamma(l + 1.0);
    case Family::student: {
      const double nu = density_.parameter();
      if (!(l + 1.0 < nu + k)) return kInf;
      const double a = 0.5 * (l + 1.0), b = 0.5 * (nu + k - l - 1.0);
      return 0.5 * (l + 1.0) * std::log(nu) - std::log(2.0) + std::lgamma(a) + std::lgamma(b) -
             std::lgamma(a + b);
    }
    case Family::power_exponential: {
      const double nu = density_.parameter();
      return 0.5 * (l + 1.0) * std::log(c0_) + std::lgamma((l + 1.0) / (2.0 * nu)) - std::log(2.0 * nu);
    }
    case Family::tabulated: {
      const auto& n = density_.nodes();
      double total = std::exp(density_.log_values().front()) * std::pow(n.front(), l + 1.0) / (l + 1.0);
      for (std::size_t i = 0; i + 1 < n.size(); ++i) total += tab_segment_integral(i, n[i], n[i + 1], l);
      total += tab_tail_integral(n.back(), l);
      return std::log(total);
    }
  }
  return 0.0;
}

double RadialLaw::moment(double l) const {
  if (!(l > -1.0)) return kInf;
  return std::exp(log_moment(l));
}

bool RadialLaw::moment_finite(double l) const { return std::isfinite(moment(l)); }

double RadialLaw::mean_square() const {
  if (density_.family() == Family::gaussian) return k_;
  return std::exp(log_moment(k_ + 1.0) - log_mu_km1_);
}

double RadialLaw::fisher_information() const {
  if (density_.family() == Family::tabulated)
    throw UnsupportedError("Fisher information needs the score of the density");
  return fisher_;
}

double RadialLaw::mean_d_phi() const {
  return expect([this](double r) { return r * phi(r); });
}

double RadialLaw::sphere_measure() const { return rankvarma::sphere_measure(k_); }

double RadialLaw::normalizer() const { return 1.0 / (sphere_measure() * std::exp(log_mu_km1_)); }

double RadialLaw::expect(const std::function<double(double)>& g, double rel_tol) const {
  auto h = [&](double y) {
    const double r = std::exp(y);
    const double lw = log_pdf(r) + y;
    if (!(lw > -745.0)) return 0.0;
    return g(r) * std::exp(lw);
  };
  const double ya = std::log(quantile(1e-4));
  const double ym = std::log(quantile(0.5));
  const double yb = std::log(quantile_upper(1e-4));
  double total = 0.0;
  total += integrate(h, -kInf, ya, rel_tol).value;
  total += integrate(h, ya, ym, rel_tol).value;
  total += integrate(h, ym, yb, rel_tol).value;
  total += integrate(h, yb, kInf, rel_tol).value;
  return total;
}

Series sample_elliptical(const RadialLaw& law, const Matrix& sigma, int n, CounterRng& rng) {
  const int k = law.dim();
  if (sigma.rows() != k) throw DomainError("scatter dimension does not match the radial law");
  const Matrix root = root_upper(sigma);
  if (n < 0) throw DomainError("sample size must be nonnegative");
  Series out(k, n);
  Vector u(k);
  for (int t = 0; t < n; ++t) {
    double norm2 = 0.0;
    do {
      for (int i = 0; i < k; ++i) u(i) = rng.normal();
      norm2 = u.squaredNorm();
    } while (norm2 == 0.0);
    u /= std::sqrt(norm2);
    const double d = law.quantile(rng.uniform());
    out.col(t) = d * (root * u);
  }
  return out;
}

}  // namespace rankvarma
