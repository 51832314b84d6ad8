#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "rankvarma/elliptical.hpp"

namespace rankvarma {

// A score K on (0,1). Besides K(u) it can evaluate K(1 - s) directly from s, which is
// what keeps quadrature over the upper tail accurate.
class ScoreFunction {
 public:
  static ScoreFunction constant(double c);
  static ScoreFunction identity();
  // K = F^{-1} of the law.
  static ScoreFunction quantile_of(RadialLaw law);
  // K = phi o F^{-1} of the law.
  static ScoreFunction phi_quantile_of(RadialLaw law);
  static ScoreFunction custom(std::function<double(double)> k);

  double operator()(double u) const;
  double upper(double s) const;
  // E[K(U)^2].
  double mean_square() const;

 private:
  enum class Kind { constant, identity, quantile, phi_quantile, custom };
  Kind kind_ = Kind::constant;
  double c_ = 1.0;
  std::shared_ptr<const RadialLaw> law_;
  std::function<double(double)> fn_;
};

enum class ScoreKind { sign, spearman, van_der_waerden, laplace, f_score, custom };

struct ScorePair {
  ScoreFunction k1, k2;
  double e_k1_sq = 1.0;
  double e_k2_sq = 1.0;
  std::string tag;
};

// sign, spearman, vdW(k), laplace(k) or f-score(density, k). The f-score needs a
// density with finite mu_{k+1} and a finite Fisher information.
ScorePair make_score_pair(ScoreKind kind, int k, const std::optional<RadialDensity>& density = std::nullopt);
ScorePair make_custom_score_pair(std::function<double(double)> k1, std::function<double(double)> k2,
                                 std::string tag = "custom");

}  // namespace rankvarma
