#include "rankvarma/linalg.hpp"

#include <limits>
#include <string>

#include "rankvarma/errors.hpp"

namespace rankvarma {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector vec(const Matrix& a) { return Eigen::Map<const Vector>(a.data(), a.size()); }

Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

void require_spd(const Matrix& sigma, const char* what) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0)
    throw DomainError(std::string(what) + " must be a non-empty square matrix");
  if (!sigma.allFinite()) throw DomainError(std::string(what) + " has non-finite entries");
  const double scale = sigma.cwiseAbs().maxCoeff();
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError(std::string(what) + " is not symmetric");
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) throw DomainError(std::string(what) + " is not positive definite");
}

Matrix inverse_root_upper(const Matrix& sigma) {
  require_spd(sigma, "scatter matrix");
  const Matrix sym = 0.5 * (sigma + sigma.transpose());
  const Matrix inv = sym.llt().solve(Matrix::Identity(sym.rows(), sym.cols()));
  Eigen::LLT<Matrix> llt(0.5 * (inv + inv.transpose()));
  if (llt.info() != Eigen::Success) throw DomainError("scatter matrix is numerically singular");
  return llt.matrixU();
}

Matrix root_upper(const Matrix& sigma) {
  const Matrix r = inverse_root_upper(sigma);
  return r.triangularView<Eigen::Upper>().solve(Matrix::Identity(r.rows(), r.cols()));
}

double spd_condition(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

double condition_number(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double lo = s(s.size() - 1);
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return s(0) / lo;
}

Matrix pseudo_inverse(const Matrix& a, double rel_cutoff) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Vector inv = Vector::Zero(s.size());
  const double cut = s.size() ? rel_cutoff * s(0) : 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace rankvarma
