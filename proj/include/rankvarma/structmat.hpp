#pragma once

#include <optional>

#include "rankvarma/kernels.hpp"
#include "rankvarma/varma.hpp"

namespace rankvarma {

struct Orders {
  int p0 = 0, q0 = 0, p1 = 0, q1 = 0;
  int pi() const { return std::max(p1 - p0, q1 - q0); }
  int pi0() const { return pi() + p0 + q0; }
  int s() const { return p0 + q0; }
};

// Checks p1 >= p0, q1 >= q0 and pi0 >= 1.
Orders make_orders(const VarmaSpec& null, int p1, int q1);

struct DOperator {
  MatrixSeq d;                   // D_1..D_{p0+q0}
  double condition = 1.0;        // of the block system
  double annihilation = 0.0;     // max |G_t + sum G_{t-i} D_i'| (and the H analogue)
  bool ill_conditioned = false;  // condition above 1e10 (still solved)
};

// D(L) = I + sum D_i L^i annihilating the transposed Green tails. Throws StructuralError
// when the block system is singular or too ill-conditioned (typically a common factor
// between A(L) and B(L)).
DOperator operator_d(const VarmaSpec& null);

// Matrix solutions Psi^(1..s)_t of D(L) Psi_t = 0 for t = pi+1..m, stored one k x ks block
// row per t. The canonical system starts from Psi^(j)_{pi+i} = delta_ij I; passing lambda
// (ks x ks, invertible) gives the system Psi * lambda instead.
struct FundamentalSystem {
  int k = 1, s = 0, pi = 0;
  MatrixSeq rows;  // rows[t - pi - 1]
  int last() const { return pi + static_cast<int>(rows.size()); }
  // Psi-bar_m: (Psi rows pi+1..m) kron I_k, size k^2 (m - pi) x k^2 s.
  Matrix bar(int m) const;
  Matrix casorati() const { return bar(pi + s); }
};

FundamentalSystem fundamental_system(const MatrixSeq& d, int k, int pi, int m,
                                     const std::optional<Matrix>& lambda = std::nullopt);

// (G'^{(l)}_{pi0,p1} | H'^{(l)}_{pi0,q1}).
Matrix build_M(const VarmaSpec& null, int p1, int q1);
// diag(I_{k^2 pi}, C_Psi^{-1}).
Matrix build_P(const FundamentalSystem& fs);
// H^{(r)}_{n-1} B^{(l)}_{n-1} diag(I_{k^2 pi}, Psi-bar_{n-1}), stored k^2(n-1) x k^2 pi0.
Matrix build_Q(const VarmaSpec& null, const FundamentalSystem& fs, int n);
// Q' [I (x) (sigma (x) sigma^{-1})] Q over the first `lags` row blocks (all when < 0).
Matrix build_J(const Matrix& q, const Matrix& sigma, int lags = -1, Exec exec = Exec::parallel);
Matrix build_N(const Matrix& m, const Matrix& p, const Matrix& j);

struct StructuralSet {
  VarmaSpec null;
  Orders orders;
  int n = 0;
  DOperator d;
  FundamentalSystem psi;
  Matrix M, P, Q;
  // Number of leading row blocks of Q with a nonzero entry; later lags contribute nothing.
  int active_lags = 0;

  Matrix J(const Matrix& sigma, int lags = -1, Exec exec = Exec::parallel) const;
  Matrix N(const Matrix& sigma) const;
};

StructuralSet build_structural(const VarmaSpec& null, int p1, int q1, int n,
                               const std::optional<Matrix>& lambda = std::nullopt);

}  // namespace rankvarma
