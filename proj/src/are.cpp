#include "rankvarma/are.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rankvarma/errors.hpp"
#include "rankvarma/special.hpp"

namespace rankvarma {

namespace {

// K(F(r)), taking the survival route in the upper half so K(1 - s) stays accurate.
double score_at_radius(const ScoreFunction& k, const RadialLaw& f, double r) {
  const double u = f.cdf(r);
  if (u <= 0.0) return k(std::numeric_limits<double>::min());  // cdf underflow near r = 0
  if (u <= 0.5) return k(u);
  const double s = f.sf(r);
  if (s <= 0.0) return k.upper(std::numeric_limits<double>::min());
  return k.upper(s);
}

void require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw NumericalError(what + " diverges");
}

}  // namespace

double dk(const ScoreFunction& k2, const RadialLaw& f) {
  if (!f.moment_finite(f.dim()))
    throw NumericalError("D_k diverges: moment mu_k of " + f.density().name() + " is infinite");
  const double v = f.expect([&](double r) { return score_at_radius(k2, f, r) * r; });
  require_finite(v, "D_k");
  return v;
}

double ck(const ScoreFunction& k1, const RadialLaw& f) {
  if (!f.density().differentiable()) throw UnsupportedError("C_k needs the score of the density");
  if (!std::isfinite(f.fisher_information()))
    throw NumericalError("C_k diverges: Fisher information of " + f.density().name() + " is infinite");
  const double v = f.expect([&](double r) { return score_at_radius(k1, f, r) * f.phi(r); });
  require_finite(v, "C_k");
  return v;
}

EfficiencyReport are_fixed_score(const ScorePair& scores, const RadialLaw& f) {
  EfficiencyReport rep;
  rep.scores = scores.tag;
  rep.density = f.density().name();
  rep.k = f.dim();
  rep.dk = dk(scores.k2, f);
  rep.ck = ck(scores.k1, f);
  rep.e_k1_sq = scores.e_k1_sq;
  rep.e_k2_sq = scores.e_k2_sq;
  const double k2 = static_cast<double>(rep.k) * rep.k;
  rep.are = rep.dk * rep.dk * rep.ck * rep.ck / (k2 * rep.e_k2_sq * rep.e_k1_sq);
  return rep;
}

double are_f_star(const RadialDensity& f_star, const RadialDensity& f, int k) {
  const RadialLaw ls(f_star, k), lf(f, k);
  const double d = dk(ScoreFunction::quantile_of(ls), lf);
  const double c = ck(ScoreFunction::phi_quantile_of(ls), lf);
  const double d_self = dk(ScoreFunction::quantile_of(ls), ls);
  const double c_self = ck(ScoreFunction::phi_quantile_of(ls), ls);
  return d * d * c * c / (static_cast<double>(k) * k * d_self * c_self);
}

double are_adaptive(const RadialLaw& f) {
  const double k = f.dim();
  return f.mean_square() * f.fisher_information() / (k * k);
}

double are_power_exponential(int k, double nu) {
  if (k < 1) throw DomainError("k must be >= 1");
  if (!(nu > 0.0)) throw DomainError("nu must be positive");
  if (!(4.0 * nu + k - 2.0 > 0.0)) throw DomainError("efficiency undefined: 4 nu + k - 2 <= 0");
  const double a = 2.0 * nu;
  const double lg = std::lgamma((k + 2.0) / a) + std::lgamma((4.0 * nu + k - 2.0) / a) - 2.0 * std::lgamma(k / a);
  return 4.0 * nu * nu * std::exp(lg) / (static_cast<double>(k) * k);
}

double find_ck(int k) {
  if (k < 1) throw DomainError("k must be >= 1");
  const double r = std::sqrt(2.0 * k - 1.0) / 2.0;
  // d/dx [sqrt(x) J_r(x)] has the sign of (1 + 2r) J_r(x) - 2x J_{r+1}(x).
  auto h = [r](double x) { return (1.0 + 2.0 * r) * bessel_j(r, x) - 2.0 * x * bessel_j(r + 1.0, x); };
  double hi_end = 2.0 * r + 20.0;
  for (int attempt = 0; attempt < 2; ++attempt, hi_end *= 2.0) {
    const double step = 0.01;
    double x0 = step, h0 = h(x0);
    for (double x1 = x0 + step; x1 <= hi_end; x1 += step) {
      const double h1 = h(x1);
      if ((h0 > 0.0) != (h1 > 0.0)) return bracket_root(h, x0, x1, 1e-15);
      x0 = x1;
      h0 = h1;
    }
  }
  throw NumericalError("no stationary point bracketed for k = " + std::to_string(k));
}

double spearman_lower_bound(int k) {
  const double c = find_ck(k);
  const double c2 = c * c;
  const double num = std::pow(2.0 * c2 + k - 1.0, 4);
  return 9.0 * num / (1024.0 * static_cast<double>(k) * k * c2 * c2);
}

std::vector<TableRow> power_exponential_table(const std::vector<int>& ks, const std::vector<double>& nus) {
  std::vector<TableRow> rows(ks.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < ks.size(); ++i) {
    rows[i].k = ks[i];
    rows[i].values.resize(nus.size());
    for (std::size_t j = 0; j < nus.size(); ++j) {
      rows[i].values[j] = 4.0 * nus[j] + ks[i] - 2.0 > 0.0 ? are_power_exponential(ks[i], nus[j])
                                                           : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return rows;
}

}  // namespace rankvarma
