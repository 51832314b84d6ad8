#pragma once

#include <vector>

#include "rankvarma/types.hpp"

namespace rankvarma {

struct TylerOptions {
  double tol = 1e-12;
  int max_iter = 500;
};

struct TylerFit {
  Matrix c;      // upper triangular, positive diagonal, c(0,0) = 1
  Matrix sigma;  // (c' c)^{-1}
  int iterations = 0;
  double residual = 0.0;
};

struct RankedResiduals {
  Series w;                // unit vectors, k x n
  Vector d;                // ||C Z_t||
  std::vector<int> ranks;  // 1..n, ties broken by time index
};

// Fixed-point iteration from the identity shape. Only the directions Z_t/|Z_t| enter,
// so any positive per-point rescaling leaves the result unchanged.
TylerFit tyler_fit(const Series& z, const TylerOptions& opt = {});

RankedResiduals tyler_residuals(const TylerFit& fit, const Series& z);

// || (1/n) sum W W' - I/k ||_F for the factor c.
double tyler_fixed_point_residual(const Matrix& c, const Series& z);

// Ranks 1..n of x, equal values ordered by index.
std::vector<int> ranks_by_value(const Vector& x);

}  // namespace rankvarma
