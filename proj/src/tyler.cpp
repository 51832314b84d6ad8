#include "rankvarma/tyler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rankvarma/errors.hpp"

namespace rankvarma {

namespace {

Series unit_directions(const Series& z) {
  Series u(z.rows(), z.cols());
  for (Eigen::Index t = 0; t < z.cols(); ++t) {
    const double nrm = z.col(t).norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm))
      throw DomainError("residual " + std::to_string(t + 1) + " is zero or non-finite");
    u.col(t) = z.col(t) / nrm;
  }
  return u;
}

// (1/n) sum y y' / |y|^2 with y = c u.
Matrix sign_covariance(const Matrix& c, const Series& u) {
  const Eigen::Index k = u.rows();
  Matrix s = Matrix::Zero(k, k);
  Vector y(k);
  for (Eigen::Index t = 0; t < u.cols(); ++t) {
    y.noalias() = c.triangularView<Eigen::Upper>() * u.col(t);
    s.selfadjointView<Eigen::Lower>().rankUpdate(y, 1.0 / y.squaredNorm());
  }
  Matrix full = s.selfadjointView<Eigen::Lower>();
  return full / static_cast<double>(u.cols());
}

// Upper-triangular U with U U' = a (Cholesky of the index-reversed matrix).
Matrix reverse_cholesky(const Matrix& a) {
  Matrix rev = a.reverse();
  Eigen::LLT<Matrix> llt(rev);
  if (llt.info() != Eigen::Success) throw EstimationError("Tyler shape update lost positive definiteness");
  Matrix l = llt.matrixL();
  return l.reverse();
}

}  // namespace

TylerFit tyler_fit(const Series& z, const TylerOptions& opt) {
  const Eigen::Index k = z.rows(), n = z.cols();
  if (k < 1) throw DomainError("empty residual dimension");
  if (n <= k * (k - 1)) throw DomainError("Tyler's estimator needs n > k(k-1)");
  if (n == 0) throw DomainError("no residuals");
  const Series u = unit_directions(z);
  const Matrix ident = Matrix::Identity(k, k) / static_cast<double>(k);
  Matrix c = Matrix::Identity(k, k);
  TylerFit fit;
  for (int it = 0;; ++it) {
    const Matrix s = sign_covariance(c, u);
    const double res = (s - ident).norm();
    fit.iterations = it;
    fit.residual = res;
    if (res < opt.tol) break;
    if (it >= opt.max_iter)
      throw EstimationError("Tyler iteration did not converge (residual " + std::to_string(res) + ")", res);
    const Matrix up = reverse_cholesky(static_cast<double>(k) * s);
    c = up.triangularView<Eigen::Upper>().solve(c);
    c.triangularView<Eigen::StrictlyLower>().setZero();
    c /= c(0, 0);
  }
  fit.c = c;
  const Matrix cinv = c.triangularView<Eigen::Upper>().solve(Matrix::Identity(k, k));
  fit.sigma = cinv * cinv.transpose();
  return fit;
}

RankedResiduals tyler_residuals(const TylerFit& fit, const Series& z) {
  const Eigen::Index k = z.rows(), n = z.cols();
  if (fit.c.rows() != k) throw DomainError("Tyler fit dimension mismatch");
  RankedResiduals rr;
  rr.w.resize(k, n);
  rr.d.resize(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    Vector y = fit.c.triangularView<Eigen::Upper>() * z.col(t);
    const double nrm = y.norm();
    if (!(nrm > 0.0)) throw DomainError("residual " + std::to_string(t + 1) + " is zero");
    rr.d(t) = nrm;
    rr.w.col(t) = y / nrm;
  }
  rr.ranks = ranks_by_value(rr.d);
  return rr;
}

double tyler_fixed_point_residual(const Matrix& c, const Series& z) {
  const Eigen::Index k = z.rows();
  return (sign_covariance(c, unit_directions(z)) - Matrix::Identity(k, k) / static_cast<double>(k)).norm();
}

std::vector<int> ranks_by_value(const Vector& x) {
  const int n = static_cast<int>(x.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return x(a) < x(b); });
  std::vector<int> r(n);
  for (int i = 0; i < n; ++i) r[idx[i]] = i + 1;
  return r;
}

}  // namespace rankvarma
