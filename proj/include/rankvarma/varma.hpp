#pragma once

#include <limits>
#include <string>

#include "rankvarma/types.hpp"

namespace rankvarma {

// X_t - sum A_i X_{t-i} = eps_t + sum B_j eps_{t-j}.
struct VarmaSpec {
  int k = 1;
  MatrixSeq ar;  // A_1..A_p
  MatrixSeq ma;  // B_1..B_q

  int p() const { return static_cast<int>(ar.size()); }
  int q() const { return static_cast<int>(ma.size()); }

  static VarmaSpec white_noise(int k);
  // Throws DomainError on inconsistent shapes or non-finite entries.
  void validate() const;
};

struct RootCheckReport {
  double ar_min_root_modulus = std::numeric_limits<double>::infinity();
  double ma_min_root_modulus = std::numeric_limits<double>::infinity();
  bool ar_leading_singular = false;
  bool ma_leading_singular = false;
  bool coprimeness_checked = false;  // never verified numerically
  bool passes = true;
  std::string summary() const;
};

RootCheckReport check_roots(const VarmaSpec& spec);

// Green's matrices of the operator I + sum_i C_i L^i: H_0 = I and
// sum_{i=0}^{min(q,u)} C_i H_{u-i} = 0 for u >= 1. Returns H_0..H_m.
MatrixSeq green_matrices(const MatrixSeq& coeffs, int k, int horizon);
// H from B(L), G from A(L) = I - sum A_i L^i.
MatrixSeq green_ma(const VarmaSpec& spec, int horizon);
MatrixSeq green_ar(const VarmaSpec& spec, int horizon);
// First u with max|H_u| < tol, capped at cap.
int green_horizon(const MatrixSeq& coeffs, int k, int cap, double tol = 1e-14);

// Zero-initial residual recursion. X is k x n.
Series residuals(const VarmaSpec& spec, const Series& x);

// X_t = sum A_i X_{t-i} + eps_t + sum B_j eps_{t-j}, zero presample. With burn_in > 0 the
// first burn_in columns of eps drive a warm-up that is then dropped.
Series simulate(const VarmaSpec& spec, const Series& eps, int burn_in = 0);

// theta + n^{-1/2} tau, tau = (vec gamma_1..vec gamma_p1, vec delta_1..vec delta_q1).
// Orders are padded with zero matrices up to (p1, q1).
VarmaSpec perturb(const VarmaSpec& spec, int p1, int q1, const Vector& tau, int n);

}  // namespace rankvarma
