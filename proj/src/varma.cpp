#include "rankvarma/varma.hpp"

#include <cmath>
#include <sstream>

#include "rankvarma/errors.hpp"

namespace rankvarma {

VarmaSpec VarmaSpec::white_noise(int k) {
  VarmaSpec s;
  s.k = k;
  return s;
}

void VarmaSpec::validate() const {
  if (k < 1) throw DomainError("VARMA dimension must be >= 1");
  for (const auto* seq : {&ar, &ma})
    for (const auto& m : *seq) {
      if (m.rows() != k || m.cols() != k) throw DomainError("VARMA coefficient has the wrong shape");
      if (!m.allFinite()) throw DomainError("VARMA coefficient has non-finite entries");
    }
}

namespace {

// Smallest root modulus of det(I - sum C_i z^i) via the companion matrix of (C_1..C_m).
double min_root_modulus(const MatrixSeq& c, int k) {
  const int m = static_cast<int>(c.size());
  if (m == 0) return std::numeric_limits<double>::infinity();
  Matrix comp = Matrix::Zero(k * m, k * m);
  for (int i = 0; i < m; ++i) comp.block(0, i * k, k, k) = c[i];
  if (m > 1) comp.block(k, 0, k * (m - 1), k * (m - 1)).setIdentity();
  Eigen::EigenSolver<Matrix> es(comp, false);
  const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
  return rho == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / rho;
}

bool near_singular(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  return !(s(s.size() - 1) > 1e-12 * std::max(1.0, s(0)));
}

}  // namespace

RootCheckReport check_roots(const VarmaSpec& spec) {
  spec.validate();
  RootCheckReport r;
  r.ar_min_root_modulus = min_root_modulus(spec.ar, spec.k);
  MatrixSeq negb;
  for (const auto& b : spec.ma) negb.push_back(-b);
  r.ma_min_root_modulus = min_root_modulus(negb, spec.k);
  if (spec.p() > 0) r.ar_leading_singular = near_singular(spec.ar.back());
  if (spec.q() > 0) r.ma_leading_singular = near_singular(spec.ma.back());
  const double thr = 1.0 + 1e-8;
  r.passes = r.ar_min_root_modulus > thr && r.ma_min_root_modulus > thr && !r.ar_leading_singular &&
             !r.ma_leading_singular;
  return r;
}

std::string RootCheckReport::summary() const {
  std::ostringstream os;
  os << "ar_min_root_modulus=" << ar_min_root_modulus << " ma_min_root_modulus=" << ma_min_root_modulus
     << " ar_leading_singular=" << ar_leading_singular << " ma_leading_singular=" << ma_leading_singular
     << " coprimeness=unchecked" << " passes=" << passes;
  return os.str();
}

MatrixSeq green_matrices(const MatrixSeq& coeffs, int k, int horizon) {
  if (horizon < 0) throw DomainError("Green horizon must be nonnegative");
  const int q = static_cast<int>(coeffs.size());
  MatrixSeq h(horizon + 1);
  h[0] = Matrix::Identity(k, k);
  for (int u = 1; u <= horizon; ++u) {
    Matrix acc = Matrix::Zero(k, k);
    for (int i = 1; i <= std::min(q, u); ++i) acc.noalias() -= coeffs[i - 1] * h[u - i];
    h[u] = std::move(acc);
  }
  return h;
}

MatrixSeq green_ma(const VarmaSpec& spec, int horizon) { return green_matrices(spec.ma, spec.k, horizon); }

MatrixSeq green_ar(const VarmaSpec& spec, int horizon) {
  MatrixSeq nega;
  for (const auto& a : spec.ar) nega.push_back(-a);
  return green_matrices(nega, spec.k, horizon);
}

int green_horizon(const MatrixSeq& coeffs, int k, int cap, double tol) {
  const int q = static_cast<int>(coeffs.size());
  if (q == 0) return std::min(1, cap);
  // Keep a sliding window of the last q matrices.
  MatrixSeq h{Matrix::Identity(k, k)};
  for (int u = 1; u <= cap; ++u) {
    Matrix acc = Matrix::Zero(k, k);
    for (int i = 1; i <= std::min(q, u); ++i) acc.noalias() -= coeffs[i - 1] * h[u - i];
    h.push_back(acc);
    // A window of q consecutive negligible terms forces every later term to vanish too.
    bool small = u >= q;
    for (int j = 0; small && j < q; ++j) small = h[u - j].cwiseAbs().maxCoeff() < tol;
    if (small) return u;
  }
  return cap;
}

Series residuals(const VarmaSpec& spec, const Series& x) {
  spec.validate();
  if (x.rows() != spec.k) throw DomainError("series dimension does not match the VARMA spec");
  const int n = static_cast<int>(x.cols());
  Series z(spec.k, n);
  for (int t = 0; t < n; ++t) {
    Vector zt = x.col(t);
    for (int i = 1; i <= spec.p() && i <= t; ++i) zt.noalias() -= spec.ar[i - 1] * x.col(t - i);
    for (int j = 1; j <= spec.q() && j <= t; ++j) zt.noalias() -= spec.ma[j - 1] * z.col(t - j);
    z.col(t) = zt;
  }
  return z;
}

Series simulate(const VarmaSpec& spec, const Series& eps, int burn_in) {
  spec.validate();
  if (eps.rows() != spec.k) throw DomainError("innovation dimension does not match the VARMA spec");
  if (burn_in < 0 || burn_in > eps.cols()) throw DomainError("burn-in must lie in [0, n]");
  const int n = static_cast<int>(eps.cols());
  Series x(spec.k, n);
  for (int t = 0; t < n; ++t) {
    Vector xt = eps.col(t);
    for (int i = 1; i <= spec.p() && i <= t; ++i) xt.noalias() += spec.ar[i - 1] * x.col(t - i);
    for (int j = 1; j <= spec.q() && j <= t; ++j) xt.noalias() += spec.ma[j - 1] * eps.col(t - j);
    x.col(t) = xt;
  }
  if (burn_in == 0) return x;
  return x.rightCols(n - burn_in);
}

VarmaSpec perturb(const VarmaSpec& spec, int p1, int q1, const Vector& tau, int n) {
  spec.validate();
  const int k = spec.k;
  if (p1 < spec.p() || q1 < spec.q()) throw DomainError("alternative orders must dominate the null orders");
  if (tau.size() != static_cast<Eigen::Index>(k) * k * (p1 + q1))
    throw DomainError("tau must have k^2 (p1 + q1) entries");
  if (n < 1) throw DomainError("n must be positive");
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  VarmaSpec out = spec;
  out.ar.resize(p1, Matrix::Zero(k, k));
  out.ma.resize(q1, Matrix::Zero(k, k));
  for (int i = 0; i < p1; ++i)
    out.ar[i] += s * Eigen::Map<const Matrix>(tau.data() + static_cast<Eigen::Index>(i) * k * k, k, k);
  for (int j = 0; j < q1; ++j)
    out.ma[j] += s * Eigen::Map<const Matrix>(tau.data() + static_cast<Eigen::Index>(p1 + j) * k * k, k, k);
  return out;
}

}  // namespace rankvarma
