#include "rankvarma/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rankvarma/errors.hpp"
#include "rankvarma/linalg.hpp"
#include "rankvarma/varma.hpp"

namespace rankvarma {

namespace {

constexpr double kCut = 8.5;

double sample_quantile(const std::vector<double>& sorted, double p) {
  const double pos = p * (sorted.size() - 1);
  const std::size_t i = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - i;
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

RadialDensityEstimate RadialDensityEstimate::fit(const Vector& distances, int k, std::optional<double> bandwidth) {
  const Eigen::Index n = distances.size();
  if (n < 50) throw DomainError("radial density estimation needs at least 50 distances");
  RadialDensityEstimate e;
  e.k_ = k;
  e.y_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(distances(i) > 0.0) || !std::isfinite(distances(i))) throw DomainError("distances must be positive and finite");
    e.y_[i] = std::log(distances(i));
  }
  std::sort(e.y_.begin(), e.y_.end());
  if (bandwidth) {
    if (!(*bandwidth > 0.0)) throw DomainError("bandwidth must be positive");
    e.h_ = *bandwidth;
  } else {
    double mean = 0.0;
    for (double v : e.y_) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : e.y_) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1));
    const double iqr = sample_quantile(e.y_, 0.75) - sample_quantile(e.y_, 0.25);
    double spread = sd;
    if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
    if (!(spread > 0.0)) throw EstimationError("distances are degenerate (all equal)");
    e.h_ = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
  }
  e.hd_ = e.h_ * std::pow(static_cast<double>(n), 2.0 / 35.0);
  return e;
}

void RadialDensityEstimate::kernel_sums(double y, double h, double* log_g, double* dlog_g) const {
  const double n = static_cast<double>(y_.size());
  const double lnorm = std::log(n * h * std::sqrt(2.0 * std::numbers::pi));
  auto lo = std::lower_bound(y_.begin(), y_.end(), y - kCut * h);
  auto hi = std::upper_bound(lo, y_.end(), y + kCut * h);
  if (lo == hi) {
    // Outside every window: the nearest point dominates.
    const double nearest = (lo == y_.end()) ? y_.back() : (lo == y_.begin() ? y_.front() : (y - *(lo - 1) < *lo - y ? *(lo - 1) : *lo));
    const double z = (y - nearest) / h;
    *log_g = -0.5 * z * z - lnorm;
    *dlog_g = -z / h;
    return;
  }
  double m = -std::numeric_limits<double>::infinity();
  for (auto it = lo; it != hi; ++it) {
    const double z = (y - *it) / h;
    m = std::max(m, -0.5 * z * z);
  }
  double s0 = 0.0, s1 = 0.0;
  for (auto it = lo; it != hi; ++it) {
    const double z = (y - *it) / h;
    const double w = std::exp(-0.5 * z * z - m);
    s0 += w;
    s1 += w * z;
  }
  *log_g = m + std::log(s0) - lnorm;
  *dlog_g = -s1 / (s0 * h);
}

double RadialDensityEstimate::big_g(double y) const {
  auto lo = std::lower_bound(y_.begin(), y_.end(), y - kCut * h_);
  auto hi = std::upper_bound(lo, y_.end(), y + kCut * h_);
  double acc = static_cast<double>(lo - y_.begin());
  for (auto it = lo; it != hi; ++it) acc += normal_cdf((y - *it) / h_);
  return acc / static_cast<double>(y_.size());
}

double RadialDensityEstimate::level(double y, double* dens) const {
  const double n = static_cast<double>(y_.size());
  auto lo = std::lower_bound(y_.begin(), y_.end(), y - kCut * h_);
  auto hi = std::upper_bound(lo, y_.end(), y + kCut * h_);
  double acc = static_cast<double>(lo - y_.begin()), s0 = 0.0;
  for (auto it = lo; it != hi; ++it) {
    const double z = (y - *it) / h_;
    acc += normal_cdf(z);
    s0 += std::exp(-0.5 * z * z);
  }
  *dens = s0 / (n * h_ * std::sqrt(2.0 * std::numbers::pi));
  return acc / n;
}

double RadialDensityEstimate::pdf(double r) const {
  if (!(r > 0.0)) return 0.0;
  double lg, dl;
  kernel_sums(std::log(r) + shift_, h_, &lg, &dl);
  return std::exp(lg) / r;
}

double RadialDensityEstimate::cdf(double r) const {
  if (!(r > 0.0)) return 0.0;
  return big_g(std::log(r) + shift_);
}

double RadialDensityEstimate::score(double r) const {
  if (!(r > 0.0)) throw DomainError("score needs r > 0");
  double lg, dl;
  kernel_sums(std::log(r) + shift_, hd_, &lg, &dl);
  return (k_ - dl) / r;
}

namespace {

// Solve G(y) = u on [lo, hi] by Newton with bisection safeguard, starting at x. g_of returns
// G(y) and its density; once a Newton step is below tolerance it is taken without re-evaluating.
template <class Est>
double solve_level(const Est& g_of, double u, double lo, double hi, double x, double* dens_out = nullptr) {
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double dens;
    const double gx = g_of(x, &dens);
    if (dens_out) *dens_out = dens;
    const double err = gx - u;
    if (std::abs(err) <= 1e-13) return x;
    if (err < 0.0)
      lo = x;
    else
      hi = x;
    if (hi - lo <= 1e-14 * std::max(1.0, std::abs(x))) return x;
    double nx = 0.5 * (lo + hi);
    if (dens > 0.0) {
      const double cand = x - err / dens;
      if (cand > lo && cand < hi) {
        if (std::abs(cand - x) <= 1e-12 * std::max(1.0, std::abs(x))) return cand;
        nx = cand;
      }
    }
    x = nx;
  }
  return x;
}

}  // namespace

double RadialDensityEstimate::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile level must lie in (0,1)");
  auto g_of = [this](double y, double* dens) { return level(y, dens); };
  const double lo = y_.front() - (kCut + 1.0) * h_;
  const double hi = y_.back() + (kCut + 1.0) * h_;
  const double y = solve_level(g_of, u, lo, hi, sample_quantile(y_, u));
  return std::exp(y - shift_);
}

RadialDensityEstimate::Table RadialDensityEstimate::table(int n) const {
  if (n < 0) n = static_cast<int>(y_.size());
  Table t;
  t.k1.resize(n);
  t.k2.resize(n);
  auto g_of = [this](double y, double* dens) { return level(y, dens); };
  const double lo0 = y_.front() - (kCut + 1.0) * h_;
  const double hi = y_.back() + (kCut + 1.0) * h_;
  double prev = lo0, dens = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = (i + 1.0) / (n + 1.0);
    // warm start one grid step on from the previous level
    const double start = (i > 0 && dens > 0.0) ? prev + 1.0 / ((n + 1.0) * dens) : sample_quantile(y_, u);
    const double y = solve_level(g_of, u, prev, hi, start, &dens);
    prev = y;
    t.k2(i) = std::exp(y - shift_);
  }
  t.trim = score_trim(n);
  const int first = std::clamp(static_cast<int>(std::ceil(t.trim * (n + 1.0))) - 1, 0, n - 1);
  const int last = std::clamp(static_cast<int>(std::floor((1.0 - t.trim) * (n + 1.0))) - 1, first, n - 1);
  for (int i = first; i <= last; ++i) {
    const double r = t.k2(i);
    double lg, dl;
    kernel_sums(std::log(r) + shift_, hd_, &lg, &dl);
    t.k1(i) = (k_ - dl) / r;
  }
  for (int i = 0; i < first; ++i) t.k1(i) = t.k1(first);
  for (int i = last + 1; i < n; ++i) t.k1(i) = t.k1(last);
  t.info = t.k1.squaredNorm() / n;
  t.v = t.k2.squaredNorm() / n;
  return t;
}

double RadialDensityEstimate::score_trim(int n) { return std::pow(static_cast<double>(n), -1.0 / 3.0); }

RadialDensityEstimate::Table RadialDensityEstimate::Table::rescaled(double a) const {
  if (!(a > 0.0)) throw DomainError("rescaling factor must be positive");
  Table t = *this;
  t.k2 /= a;
  t.k1 *= a;
  t.info *= a * a;
  t.v /= a * a;
  return t;
}

RadialDensityEstimate RadialDensityEstimate::rescaled(double a) const {
  if (!(a > 0.0)) throw DomainError("rescaling factor must be positive");
  RadialDensityEstimate e = *this;
  e.shift_ += std::log(a);
  return e;
}

RadialDensityEstimate RadialDensityEstimate::normalized(double target) const {
  const Table t = table();
  return rescaled(std::sqrt(t.v / target));
}

CrossCovSeq adaptive_crosscov_all(const RadialDensityEstimate::Table& tab, const RankedResiduals& rr,
                                  const TylerFit& fit, int max_lag, Exec exec) {
  const Eigen::Index n = rr.w.cols();
  if (tab.k1.size() != n) throw DomainError("score table length must equal n");
  Vector a(n), b(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    a(t) = tab.k1(rr.ranks[t] - 1);
    b(t) = tab.k2(rr.ranks[t] - 1);
  }
  return crosscov_from_scores(a, b, rr.w, fit.c, max_lag, exec);
}

Matrix adaptive_crosscov(const RadialDensityEstimate& est, const RankedResiduals& rr, const TylerFit& fit, int lag) {
  const int n = static_cast<int>(rr.w.cols());
  if (lag < 1 || lag > n - 1) throw DomainError("lag must lie in 1..n-1");
  return adaptive_crosscov_all(est.table(n), rr, fit, lag, Exec::serial).gamma.back();
}

Matrix adaptive_crosscov_oracle(const Matrix& sigma, const Series& z, int lag, std::optional<double> bandwidth) {
  const int n = static_cast<int>(z.cols()), k = static_cast<int>(z.rows());
  if (lag < 1 || lag > n - 1) throw DomainError("lag must lie in 1..n-1");
  const Matrix r = inverse_root_upper(sigma);
  RankedResiduals rr;
  rr.w.resize(k, n);
  rr.d.resize(n);
  for (int t = 0; t < n; ++t) {
    Vector y = r.triangularView<Eigen::Upper>() * z.col(t);
    rr.d(t) = y.norm();
    rr.w.col(t) = y / rr.d(t);
  }
  rr.ranks = ranks_by_value(rr.d);
  const auto raw = RadialDensityEstimate::fit(rr.d, k, bandwidth).table(n);
  TylerFit pseudo;
  pseudo.c = r;  // sandwich with the true upper root
  return adaptive_crosscov_all(raw.rescaled(std::sqrt(raw.v)), rr, pseudo, lag, Exec::serial).gamma.back();
}

QuadraticPieces adaptive_pieces(const StructuralSet& ss, const Series& z, const TestOptions& opt, Diagnostics* diag) {
  const int n = static_cast<int>(z.cols()), k = static_cast<int>(z.rows());
  const TylerFit fit = tyler_fit(z, opt.tyler);
  const RankedResiduals rr = tyler_residuals(fit, z);
  // The statistic does not depend on the scale of the estimate; normalize the table directly.
  const auto raw = RadialDensityEstimate::fit(rr.d, k, opt.kde_bandwidth).table(n);
  const auto tab = raw.rescaled(std::sqrt(raw.v));
  QuadraticPieces qp;
  qp.lags = effective_lags(ss, n, opt.max_lag);
  qp.neglected = neglected_mass(ss, qp.lags);
  CrossCovSeq cc = adaptive_crosscov_all(tab, rr, fit, qp.lags, opt.exec);
  qp.u = project_stack(ss, cc.stack(), qp.lags);
  qp.j = ss.J(opt.known_sigma ? *opt.known_sigma : fit.sigma, qp.lags, opt.exec);
  qp.factor = static_cast<double>(k) * k / (tab.info * tab.v);
  if (diag) {
    diag->tyler_iterations = fit.iterations;
    diag->tyler_residual = fit.residual;
    diag->e_k1_sq = tab.info;
    diag->e_k2_sq = tab.v;
    if (opt.keep_crosscov) diag->crosscov = std::move(cc.gamma);
  }
  return qp;
}

TestReport statistic_adaptive(const StructuralSet& ss, const Series& z, const TestOptions& opt) {
  Diagnostics diag;
  const QuadraticPieces qp = adaptive_pieces(ss, z, opt, &diag);
  return make_report(ss, qp, "adaptive", opt, std::move(diag));
}

TestReport statistic_adaptive(const Series& x, const VarmaSpec& null, int p1, int q1, const TestOptions& opt) {
  const StructuralSet ss = build_structural(null, p1, q1, static_cast<int>(x.cols()));
  return statistic_adaptive(ss, residuals(null, x), opt);
}

}  // namespace rankvarma
