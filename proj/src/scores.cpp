#include "rankvarma/scores.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rankvarma/errors.hpp"
#include "rankvarma/special.hpp"

namespace rankvarma {

ScoreFunction ScoreFunction::constant(double c) {
  ScoreFunction s;
  s.kind_ = Kind::constant;
  s.c_ = c;
  return s;
}

ScoreFunction ScoreFunction::identity() {
  ScoreFunction s;
  s.kind_ = Kind::identity;
  return s;
}

ScoreFunction ScoreFunction::quantile_of(RadialLaw law) {
  ScoreFunction s;
  s.kind_ = Kind::quantile;
  s.law_ = std::make_shared<const RadialLaw>(std::move(law));
  return s;
}

ScoreFunction ScoreFunction::phi_quantile_of(RadialLaw law) {
  if (!law.density().differentiable())
    throw UnsupportedError("phi-based score needs a differentiable density");
  ScoreFunction s;
  s.kind_ = Kind::phi_quantile;
  s.law_ = std::make_shared<const RadialLaw>(std::move(law));
  return s;
}

ScoreFunction ScoreFunction::custom(std::function<double(double)> k) {
  ScoreFunction s;
  s.kind_ = Kind::custom;
  s.fn_ = std::move(k);
  return s;
}

double ScoreFunction::operator()(double u) const {
  switch (kind_) {
    case Kind::constant: return c_;
    case Kind::identity: return u;
    case Kind::quantile: return law_->quantile(u);
    case Kind::phi_quantile: return law_->phi(law_->quantile(u));
    case Kind::custom: return fn_(u);
  }
  return 0.0;
}

double ScoreFunction::upper(double s) const {
  switch (kind_) {
    case Kind::constant: return c_;
    case Kind::identity: return 1.0 - s;
    case Kind::quantile: return law_->quantile_upper(s);
    case Kind::phi_quantile: return law_->phi(law_->quantile_upper(s));
    case Kind::custom: return fn_(std::min(1.0 - s, std::nextafter(1.0, 0.0)));  // 1 - s rounds to 1 for tiny s
  }
  return 0.0;
}

double ScoreFunction::mean_square() const {
  switch (kind_) {
    case Kind::constant: return c_ * c_;
    case Kind::identity: return 1.0 / 3.0;
    case Kind::quantile: return law_->mean_square();
    case Kind::phi_quantile: return law_->fisher_information();
    case Kind::custom: {
      auto g = [this](double u) {
        const double v = fn_(u);
        return v * v;
      };
      const double lo = integrate(g, 0.0, 0.5, 1e-11).value;
      const double hi = integrate(g, 0.5, 1.0, 1e-11).value;
      return lo + hi;
    }
  }
  return 0.0;
}

ScorePair make_score_pair(ScoreKind kind, int k, const std::optional<RadialDensity>& density) {
  if (k < 1) throw DomainError("dimension k must be >= 1");
  ScorePair p;
  switch (kind) {
    case ScoreKind::sign:
      p.k1 = p.k2 = ScoreFunction::constant(1.0);
      p.tag = "sign";
      break;
    case ScoreKind::spearman:
      p.k1 = p.k2 = ScoreFunction::identity();
      p.tag = "spearman";
      break;
    case ScoreKind::van_der_waerden: {
      RadialLaw g(RadialDensity::gaussian(), k);
      p.k1 = ScoreFunction::phi_quantile_of(g);
      p.k2 = ScoreFunction::quantile_of(g);
      p.tag = "vdw";
      break;
    }
    case ScoreKind::laplace: {
      RadialLaw l(RadialDensity::laplace(), k);
      p.k1 = ScoreFunction::constant(1.0);
      p.k2 = ScoreFunction::quantile_of(l);
      p.tag = "laplace";
      break;
    }
    case ScoreKind::f_score: {
      if (!density) throw ConfigError("f-score needs a density");
      RadialLaw law(*density, k);
      if (!law.density().differentiable()) throw ConfigError("f-score needs a differentiable density");
      if (!law.moment_finite(k + 1.0))
        throw ConfigError("f-score density " + density->name() + " has infinite moment mu_{k+1}");
      if (!std::isfinite(law.fisher_information()))
        throw ConfigError("f-score density " + density->name() + " has infinite Fisher information");
      p.k1 = ScoreFunction::phi_quantile_of(law);
      p.k2 = ScoreFunction::quantile_of(law);
      p.tag = "fscore:" + density->name();
      break;
    }
    case ScoreKind::custom: throw ConfigError("use make_custom_score_pair for custom scores");
  }
  p.e_k1_sq = p.k1.mean_square();
  p.e_k2_sq = p.k2.mean_square();
  return p;
}

ScorePair make_custom_score_pair(std::function<double(double)> k1, std::function<double(double)> k2,
                                 std::string tag) {
  ScorePair p;
  p.k1 = ScoreFunction::custom(std::move(k1));
  p.k2 = ScoreFunction::custom(std::move(k2));
  p.e_k1_sq = p.k1.mean_square();
  p.e_k2_sq = p.k2.mean_square();
  if (!std::isfinite(p.e_k1_sq) || !std::isfinite(p.e_k2_sq))
    throw ConfigError("custom scores are not square integrable");
  p.tag = std::move(tag);
  return p;
}

}  // namespace rankvarma
