#include "rankvarma/crosscov.hpp"

#include <cmath>

#include "rankvarma/errors.hpp"
#include "rankvarma/linalg.hpp"

namespace rankvarma {

Vector crosscov_stack(const MatrixSeq& gamma, int n) {
  if (gamma.empty()) return Vector();
  const Eigen::Index kk = gamma.front().size();
  if (static_cast<int>(gamma.size()) > n - 1) throw DomainError("more lags than n - 1");
  Vector s(kk * static_cast<Eigen::Index>(gamma.size()));
  for (std::size_t i = 0; i < gamma.size(); ++i)
    s.segment(static_cast<Eigen::Index>(i) * kk, kk) = std::sqrt(static_cast<double>(n - 1 - static_cast<int>(i))) * vec(gamma[i]);
  return s;
}

Vector CrossCovSeq::stack() const { return crosscov_stack(gamma, n); }

Vector score_values(const ScoreFunction& k, const std::vector<int>& ranks) {
  const double denom = static_cast<double>(ranks.size()) + 1.0;
  Vector out(static_cast<Eigen::Index>(ranks.size()));
  for (std::size_t t = 0; t < ranks.size(); ++t) out(static_cast<Eigen::Index>(t)) = k(ranks[t] / denom);
  return out;
}

CrossCovSeq crosscov_from_scores(const Vector& a, const Vector& b, const Series& w, const Matrix& c,
                                 int max_lag, Exec exec) {
  CrossCovSeq out;
  out.n = static_cast<int>(w.cols());
  out.gamma = lagged_products(a, b, w, max_lag, exec);
  const Matrix ct = c.transpose();
  const Matrix ct_inv = ct.triangularView<Eigen::Lower>().solve(Matrix::Identity(c.rows(), c.cols()));
  for (auto& g : out.gamma) g = ct * g * ct_inv;
  return out;
}

CrossCovSeq rank_crosscov_all(const ScorePair& scores, const RankedResiduals& rr, const TylerFit& fit,
                              int max_lag, Exec exec) {
  const Vector a = score_values(scores.k1, rr.ranks);
  const Vector b = score_values(scores.k2, rr.ranks);
  return crosscov_from_scores(a, b, rr.w, fit.c, max_lag, exec);
}

Matrix rank_crosscov(const ScorePair& scores, const RankedResiduals& rr, const TylerFit& fit, int lag) {
  const int n = static_cast<int>(rr.w.cols());
  if (lag < 1 || lag > n - 1) throw DomainError("lag must lie in 1..n-1");
  const Vector a = score_values(scores.k1, rr.ranks);
  const Vector b = score_values(scores.k2, rr.ranks);
  const Matrix ct = fit.c.transpose();
  const Matrix ct_inv = ct.triangularView<Eigen::Lower>().solve(Matrix::Identity(ct.rows(), ct.cols()));
  return ct * lagged_product(a, b, rr.w, lag) * ct_inv;
}

namespace {

struct Standardized {
  Matrix r;   // upper inverse root
  Series u;   // directions
  Vector d;   // radii
};

Standardized standardize(const Matrix& sigma, const Series& z) {
  Standardized s;
  s.r = inverse_root_upper(sigma);
  s.u.resize(z.rows(), z.cols());
  s.d.resize(z.cols());
  for (Eigen::Index t = 0; t < z.cols(); ++t) {
    Vector y = s.r.triangularView<Eigen::Upper>() * z.col(t);
    s.d(t) = y.norm();
    if (!(s.d(t) > 0.0)) throw DomainError("zero residual");
    s.u.col(t) = y / s.d(t);
  }
  return s;
}

Matrix sandwich(const Matrix& r, const Matrix& g) {
  const Matrix rt = r.transpose();
  const Matrix rt_inv = rt.triangularView<Eigen::Lower>().solve(Matrix::Identity(r.rows(), r.cols()));
  return rt * g * rt_inv;
}

}  // namespace

Matrix parametric_crosscov(const RadialLaw& law, const Matrix& sigma, const Series& z, int lag) {
  const int n = static_cast<int>(z.cols());
  if (lag < 1 || lag > n - 1) throw DomainError("lag must lie in 1..n-1");
  const Standardized s = standardize(sigma, z);
  Vector a(n), b(n);
  for (int t = 0; t < n; ++t) {
    a(t) = law.phi(s.d(t));
    b(t) = s.d(t);
  }
  return sandwich(s.r, lagged_product(a, b, s.u, lag));
}

Matrix score_crosscov_oracle(const ScorePair& scores, const RadialLaw& law, const Matrix& sigma,
                             const Series& z, int lag) {
  const int n = static_cast<int>(z.cols());
  if (lag < 1 || lag > n - 1) throw DomainError("lag must lie in 1..n-1");
  const Standardized s = standardize(sigma, z);
  Vector a(n), b(n);
  for (int t = 0; t < n; ++t) {
    const double u = law.cdf(s.d(t));
    const double up = law.sf(s.d(t));
    a(t) = u <= 0.5 ? scores.k1(u) : scores.k1.upper(up);
    b(t) = u <= 0.5 ? scores.k2(u) : scores.k2.upper(up);
  }
  return sandwich(s.r, lagged_product(a, b, s.u, lag));
}

CrossCovSeq gaussian_crosscov_all(const Series& z, int max_lag, Exec exec) {
  const int n = static_cast<int>(z.cols());
  const Matrix s = (z * z.transpose()) / static_cast<double>(n);
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success || spd_condition(s) > 1e14)
    throw EstimationError("empirical covariance of the residuals is singular");
  const Vector ones = Vector::Ones(n);
  CrossCovSeq out;
  out.n = n;
  out.gamma = lagged_products(ones, ones, z, max_lag, exec);
  for (auto& g : out.gamma) g = llt.solve(g);
  return out;
}

}  // namespace rankvarma
