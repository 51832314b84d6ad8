#pragma once

#include "rankvarma/types.hpp"

namespace rankvarma {

Matrix kron(const Matrix& a, const Matrix& b);
// Column-major vec.
Vector vec(const Matrix& a);
Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols);

// Upper-triangular R with R^T R = sigma^{-1}; this is the square-root convention used
// throughout for the shape inverse root. Throws DomainError if sigma is not SPD.
Matrix inverse_root_upper(const Matrix& sigma);
// R^{-1}, so that sigma = S S^T with S upper triangular.
Matrix root_upper(const Matrix& sigma);

// Ratio of extreme eigenvalues of a symmetric matrix (inf if not positive definite).
double spd_condition(const Matrix& a);
// Ratio of extreme singular values.
double condition_number(const Matrix& a);

// Moore-Penrose inverse from an SVD with relative cutoff.
Matrix pseudo_inverse(const Matrix& a, double rel_cutoff = 1e-12);

void require_spd(const Matrix& sigma, const char* what);

}  // namespace rankvarma
