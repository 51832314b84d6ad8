#include "rankvarma/kernels.hpp"

#include <omp.h>

#include <vector>

#include "rankvarma/errors.hpp"
#include "rankvarma/special.hpp"

namespace rankvarma {

Matrix lagged_product(const Vector& a, const Vector& b, const Series& w, int lag) {
  const Eigen::Index k = w.rows(), n = w.cols();
  std::vector<CompensatedSum> acc(static_cast<std::size_t>(k * k));
  for (Eigen::Index t = lag; t < n; ++t) {
    const double s = a(t) * b(t - lag);
    const auto wt = w.col(t);
    const auto ws = w.col(t - lag);
    for (Eigen::Index c = 0; c < k; ++c) {
      const double sc = s * ws(c);
      for (Eigen::Index r = 0; r < k; ++r) acc[c * k + r].add(sc * wt(r));
    }
  }
  Matrix g(k, k);
  const double inv = 1.0 / static_cast<double>(n - lag);
  for (Eigen::Index c = 0; c < k; ++c)
    for (Eigen::Index r = 0; r < k; ++r) g(r, c) = acc[c * k + r].value() * inv;
  return g;
}

namespace {

constexpr int kChunk = 64;

Matrix chunk_information(const Matrix& q, const Matrix& kmat, int from, int to) {
  const Eigen::Index h = kmat.rows(), m = q.cols();
  Matrix j = Matrix::Zero(m, m);
  Matrix tmp(h, m);
  for (int r = from; r < to; ++r) {
    const auto qr = q.middleRows(static_cast<Eigen::Index>(r) * h, h);
    tmp.noalias() = kmat * qr;
    j.noalias() += qr.transpose() * tmp;
  }
  return j;
}

}  // namespace

MatrixSeq lagged_products(const Vector& a, const Vector& b, const Series& w, int max_lag, Exec exec) {
  const int n = static_cast<int>(w.cols());
  if (a.size() != n || b.size() != n) throw DomainError("score vectors must match the series length");
  if (max_lag < 0 || max_lag > n - 1) throw DomainError("lag out of range");
  MatrixSeq out(max_lag);
  if (exec == Exec::serial) {
    for (int i = 1; i <= max_lag; ++i) out[i - 1] = lagged_product(a, b, w, i);
  } else {
#pragma omp parallel for schedule(dynamic, 4)
    for (int i = 1; i <= max_lag; ++i) out[i - 1] = lagged_product(a, b, w, i);
  }
  return out;
}

Matrix accumulate_information(const Matrix& q, const Matrix& kmat, int blocks, Exec exec) {
  const Eigen::Index h = kmat.rows();
  if (kmat.cols() != h || q.rows() < static_cast<Eigen::Index>(blocks) * h)
    throw DomainError("information accumulation: shape mismatch");
  if (exec == Exec::serial) return chunk_information(q, kmat, 0, blocks);
  const int nchunks = (blocks + kChunk - 1) / kChunk;
  std::vector<Matrix> partial(nchunks);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < nchunks; ++c)
    partial[c] = chunk_information(q, kmat, c * kChunk, std::min(blocks, (c + 1) * kChunk));
  Matrix j = Matrix::Zero(q.cols(), q.cols());
  for (const auto& p : partial) j += p;
  return j;
}

}  // namespace rankvarma
