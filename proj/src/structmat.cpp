#include "rankvarma/structmat.hpp"

#include <cmath>
#include <string>

#include "rankvarma/errors.hpp"
#include "rankvarma/linalg.hpp"

namespace rankvarma {

Orders make_orders(const VarmaSpec& null, int p1, int q1) {
  Orders o{null.p(), null.q(), p1, q1};
  if (p1 < o.p0 || q1 < o.q0) throw DomainError("alternative orders (p1, q1) must dominate the null orders");
  if (o.pi0() < 1) throw DomainError("nothing to test: pi0 = 0");
  return o;
}

DOperator operator_d(const VarmaSpec& null) {
  null.validate();
  const int k = null.k, p0 = null.p(), q0 = null.q(), s = p0 + q0;
  DOperator out;
  if (s == 0) return out;
  const MatrixSeq G = green_ar(null, s);
  const MatrixSeq H = green_ma(null, s);
  const Matrix zero = Matrix::Zero(k, k);
  auto g = [&](int u) -> const Matrix& { return u < 0 ? zero : G[u]; };
  auto h = [&](int u) -> const Matrix& { return u < 0 ? zero : H[u]; };

  Matrix sys(k * s, k * s), rhs(k * s, k);
  for (int r = 0; r < p0; ++r) {
    for (int c = 0; c < s; ++c) sys.block(r * k, c * k, k, k) = g(q0 + r - c);
    rhs.block(r * k, 0, k, k) = G[q0 + 1 + r];
  }
  for (int r = 0; r < q0; ++r) {
    for (int c = 0; c < s; ++c) sys.block((p0 + r) * k, c * k, k, k) = h(p0 + r - c);
    rhs.block((p0 + r) * k, 0, k, k) = H[p0 + 1 + r];
  }
  out.condition = condition_number(sys);
  if (!std::isfinite(out.condition) || out.condition > 1e13)
    throw StructuralError("D(L) system is singular (condition " + std::to_string(out.condition) +
                          "); A(L) and B(L) probably share a common left factor");
  out.ill_conditioned = out.condition > 1e10;
  const Matrix x = -sys.fullPivLu().solve(rhs);
  out.d.resize(s);
  for (int i = 0; i < s; ++i) out.d[i] = x.block(i * k, 0, k, k).transpose();

  double worst = 0.0, scale = 1.0;
  for (int t = q0 + 1; t <= s; ++t) {
    Matrix e = G[t];
    for (int i = 1; i <= s; ++i) e.noalias() += g(t - i) * out.d[i - 1].transpose();
    worst = std::max(worst, e.cwiseAbs().maxCoeff());
    scale = std::max(scale, G[t].cwiseAbs().maxCoeff());
  }
  for (int t = p0 + 1; t <= s; ++t) {
    Matrix e = H[t];
    for (int i = 1; i <= s; ++i) e.noalias() += h(t - i) * out.d[i - 1].transpose();
    worst = std::max(worst, e.cwiseAbs().maxCoeff());
    scale = std::max(scale, H[t].cwiseAbs().maxCoeff());
  }
  out.annihilation = worst;
  if (worst > 1e-9 * scale)
    throw StructuralError("D(L) fails to annihilate the Green tails (residual " + std::to_string(worst) + ")");
  return out;
}

Matrix FundamentalSystem::bar(int m) const {
  if (m <= pi || m > last()) throw DomainError("Psi-bar horizon out of range");
  const int rowsn = m - pi;
  const Matrix ik = Matrix::Identity(k, k);
  Matrix out(static_cast<Eigen::Index>(k) * k * rowsn, static_cast<Eigen::Index>(k) * k * s);
  for (int r = 0; r < rowsn; ++r) out.middleRows(static_cast<Eigen::Index>(r) * k * k, k * k) = kron(rows[r], ik);
  return out;
}

FundamentalSystem fundamental_system(const MatrixSeq& d, int k, int pi, int m, const std::optional<Matrix>& lambda) {
  const int s = static_cast<int>(d.size());
  if (m <= pi) throw DomainError("fundamental system horizon must exceed pi");
  FundamentalSystem fs;
  fs.k = k;
  fs.s = s;
  fs.pi = pi;
  fs.rows.resize(m - pi);
  for (int r = 0; r < m - pi; ++r) {
    if (r < s) {
      fs.rows[r] = Matrix::Zero(k, k * s);
      fs.rows[r].block(0, r * k, k, k).setIdentity();
    } else {
      Matrix acc = Matrix::Zero(k, k * s);
      for (int l = 1; l <= s; ++l) acc.noalias() -= d[l - 1] * fs.rows[r - l];
      fs.rows[r] = std::move(acc);
    }
  }
  if (lambda) {
    if (lambda->rows() != k * s || lambda->cols() != k * s) throw DomainError("lambda must be ks x ks");
    for (auto& row : fs.rows) row = row * (*lambda);
  }
  return fs;
}

Matrix build_M(const VarmaSpec& null, int p1, int q1) {
  const Orders o = make_orders(null, p1, q1);
  const int k = null.k, pi0 = o.pi0(), kk = k * k;
  const MatrixSeq G = green_ar(null, pi0);
  const MatrixSeq H = green_ma(null, pi0);
  const Matrix ik = Matrix::Identity(k, k);
  Matrix m = Matrix::Zero(kk * pi0, kk * (p1 + q1));
  for (int r = 0; r < pi0; ++r) {
    for (int c = 0; c < p1 && c <= r; ++c) m.block(r * kk, c * kk, kk, kk) = kron(G[r - c].transpose(), ik);
    for (int c = 0; c < q1 && c <= r; ++c) m.block(r * kk, (p1 + c) * kk, kk, kk) = kron(H[r - c].transpose(), ik);
  }
  return m;
}

Matrix build_P(const FundamentalSystem& fs) {
  const int kk = fs.k * fs.k;
  const int a = kk * fs.pi, b = kk * fs.s;
  Matrix p = Matrix::Zero(a + b, a + b);
  p.topLeftCorner(a, a).setIdentity();
  if (b > 0) {
    const Matrix c = fs.casorati();
    Eigen::FullPivLU<Matrix> lu(c);
    if (!lu.isInvertible()) throw StructuralError("Casorati matrix is singular");
    p.bottomRightCorner(b, b) = lu.inverse();
  }
  return p;
}

Matrix build_Q(const VarmaSpec& null, const FundamentalSystem& fs, int n) {
  const int k = null.k, kk = k * k, pi = fs.pi, s = fs.s, pi0 = pi + s, q0 = null.q();
  if (n < pi0 + 2) throw DomainError("n must be at least pi0 + 2");
  if (fs.last() < n - 1 && s > 0) throw DomainError("fundamental system too short for n");
  const int blocks = n - 1;
  // T_l = sum_{j=0}^{min(q0,l)} B_j (x) H_{l-j}; beyond the Green decay horizon it is 0.
  const int lh = green_horizon(null.ma, k, blocks, 1e-18);
  const int lt = std::min(blocks - 1, lh + q0);
  const MatrixSeq H = green_ma(null, lt);
  MatrixSeq T(lt + 1);
  for (int l = 0; l <= lt; ++l) {
    T[l] = kron(Matrix::Identity(k, k), H[l]);
    for (int j = 1; j <= std::min(q0, l); ++j) T[l] += kron(null.ma[j - 1], H[l - j]);
  }
  Matrix q = Matrix::Zero(static_cast<Eigen::Index>(kk) * blocks, static_cast<Eigen::Index>(kk) * pi0);
  for (int c = 0; c < pi; ++c)
    for (int b = c; b < blocks && b - c <= lt; ++b)
      q.block(static_cast<Eigen::Index>(b) * kk, c * kk, kk, kk) = T[b - c];
  if (s > 0) {
    const Matrix bar = fs.bar(n - 1);  // block row c - pi holds Psi_{c+1} (x) I
    for (int b = pi; b < blocks; ++b) {
      auto dst = q.block(static_cast<Eigen::Index>(b) * kk, static_cast<Eigen::Index>(kk) * pi, kk,
                         static_cast<Eigen::Index>(kk) * s);
      for (int c = std::max(pi, b - lt); c <= b; ++c)
        dst.noalias() += T[b - c] * bar.middleRows(static_cast<Eigen::Index>(c - pi) * kk, kk);
    }
  }
  return q;
}

Matrix build_J(const Matrix& q, const Matrix& sigma, int lags, Exec exec) {
  require_spd(sigma, "scatter matrix");
  const Eigen::Index k = sigma.rows(), kk = k * k;
  if (q.rows() % kk != 0) throw DomainError("Q height is not a multiple of k^2");
  const int total = static_cast<int>(q.rows() / kk);
  const int blocks = lags < 0 ? total : std::min(lags, total);
  const Matrix sinv = sigma.llt().solve(Matrix::Identity(k, k));
  const Matrix kmat = kron(sigma, sinv);
  Matrix j = accumulate_information(q, kmat, blocks, exec);
  return 0.5 * (j + j.transpose());
}

Matrix build_N(const Matrix& m, const Matrix& p, const Matrix& j) {
  const Matrix pm = p * m;
  Matrix nmat = pm.transpose() * j * pm;
  return 0.5 * (nmat + nmat.transpose());
}

Matrix StructuralSet::J(const Matrix& sigma, int lags, Exec exec) const {
  if (lags < 0 || lags > active_lags) lags = active_lags;
  return build_J(Q, sigma, lags, exec);
}

Matrix StructuralSet::N(const Matrix& sigma) const { return build_N(M, P, J(sigma)); }

StructuralSet build_structural(const VarmaSpec& null, int p1, int q1, int n, const std::optional<Matrix>& lambda) {
  StructuralSet ss;
  ss.null = null;
  ss.orders = make_orders(null, p1, q1);
  ss.n = n;
  const int k = null.k, kk = k * k;
  ss.d = operator_d(null);
  const int pi = ss.orders.pi();
  ss.psi = fundamental_system(ss.d.d, k, pi, std::max(n - 1, ss.orders.pi0()), lambda);
  ss.M = build_M(null, p1, q1);
  ss.P = build_P(ss.psi);
  ss.Q = build_Q(null, ss.psi, n);
  ss.active_lags = 0;
  for (int b = n - 2; b >= 0; --b) {
    if (ss.Q.middleRows(static_cast<Eigen::Index>(b) * kk, kk).cwiseAbs().maxCoeff() != 0.0) {
      ss.active_lags = b + 1;
      break;
    }
  }
  return ss;
}

}  // namespace rankvarma
