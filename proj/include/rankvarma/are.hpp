#pragma once

#include <string>
#include <vector>

#include "rankvarma/scores.hpp"

namespace rankvarma {

struct EfficiencyReport {
  std::string scores, density;
  int k = 0;
  double dk = 0.0, ck = 0.0;
  double e_k1_sq = 0.0, e_k2_sq = 0.0;
  double are = 0.0;
};

// D_k(K; f) = E[K(F(d)) d] and C_k(K; f) = E[K(F(d)) phi_f(d)] under the law of d.
double dk(const ScoreFunction& k2, const RadialLaw& f);
double ck(const ScoreFunction& k1, const RadialLaw& f);

// Efficiency against the Gaussian procedure.
EfficiencyReport are_fixed_score(const ScorePair& scores, const RadialLaw& f);
double are_f_star(const RadialDensity& f_star, const RadialDensity& f, int k);
double are_adaptive(const RadialLaw& f);
// Closed form for the power-exponential family; DomainError unless 4 nu + k - 2 > 0.
double are_power_exponential(int k, double nu);

// First positive stationary point of sqrt(x) J_r(x), r = sqrt(2k - 1)/2.
double find_ck(int k);
// Lower bound of the Spearman-vs-van der Waerden efficiency in dimension k.
double spearman_lower_bound(int k);

struct TableRow {
  int k = 0;
  std::vector<double> values;  // NaN where undefined
};
std::vector<TableRow> power_exponential_table(const std::vector<int>& ks, const std::vector<double>& nus);

}  // namespace rankvarma
