#pragma once

#include "rankvarma/elliptical.hpp"
#include "rankvarma/kernels.hpp"
#include "rankvarma/scores.hpp"
#include "rankvarma/tyler.hpp"

namespace rankvarma {

struct CrossCovSeq {
  MatrixSeq gamma;  // lags 1..m
  int n = 0;
  Vector stack() const;
};

// Concatenation of (n-i)^{1/2} vec Gamma_i, i = 1..m.
Vector crosscov_stack(const MatrixSeq& gamma, int n);

// K(R_t/(n+1)) for each time point.
Vector score_values(const ScoreFunction& k, const std::vector<int>& ranks);

// C' G (C')^{-1} for every lagged product G of the given score sequences.
CrossCovSeq crosscov_from_scores(const Vector& a, const Vector& b, const Series& w, const Matrix& c,
                                 int max_lag, Exec exec = Exec::parallel);

Matrix rank_crosscov(const ScorePair& scores, const RankedResiduals& rr, const TylerFit& fit, int lag);
CrossCovSeq rank_crosscov_all(const ScorePair& scores, const RankedResiduals& rr, const TylerFit& fit,
                              int max_lag, Exec exec = Exec::parallel);

// (n-i)^{-1} R' [sum phi(d_t) d_{t-i} U_t U_{t-i}'] R'^{-1}, R the upper inverse root of sigma.
Matrix parametric_crosscov(const RadialLaw& law, const Matrix& sigma, const Series& z, int lag);

// Same sandwich with phi(d_t) d_{t-i} replaced by K1(F(d_t)) K2(F(d_{t-i})): the
// population score version of the rank statistic, with true sigma and true radii.
Matrix score_crosscov_oracle(const ScorePair& scores, const RadialLaw& law, const Matrix& sigma,
                             const Series& z, int lag);

// S^{-1} C_i with S = n^{-1} sum Z Z' and C_i = (n-i)^{-1} sum Z_t Z_{t-i}'.
CrossCovSeq gaussian_crosscov_all(const Series& z, int max_lag, Exec exec = Exec::parallel);

}  // namespace rankvarma
