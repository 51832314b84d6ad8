#include "rankvarma/teststat.hpp"

#include <algorithm>
#include <cmath>

#include "rankvarma/adaptive.hpp"
#include "rankvarma/are.hpp"
#include "rankvarma/errors.hpp"
#include "rankvarma/linalg.hpp"
#include "rankvarma/special.hpp"

namespace rankvarma {

std::string TestMethod::tag() const {
  switch (method) {
    case Method::sign: return "sign";
    case Method::spearman: return "spearman";
    case Method::vdw: return "vdw";
    case Method::laplace: return "laplace";
    case Method::adaptive: return "adaptive";
    case Method::gaussian: return "gaussian";
    case Method::fscore: return "fscore:" + (density ? density->name() : std::string("?"));
  }
  return "?";
}

TestMethod parse_method(const std::string& s) {
  TestMethod m;
  if (s == "sign") m.method = Method::sign;
  else if (s == "spearman") m.method = Method::spearman;
  else if (s == "vdw" || s == "van-der-waerden") m.method = Method::vdw;
  else if (s == "laplace") m.method = Method::laplace;
  else if (s == "adaptive") m.method = Method::adaptive;
  else if (s == "gaussian") m.method = Method::gaussian;
  else if (s.rfind("fscore:", 0) == 0) {
    m.method = Method::fscore;
    std::string rest = s.substr(7);
    double param = 0.0;
    const auto colon = rest.find(':');
    if (colon != std::string::npos) {
      try {
        param = std::stod(rest.substr(colon + 1));
      } catch (const std::exception&) {
        throw ConfigError("bad density parameter in '" + s + "'");
      }
      rest = rest.substr(0, colon);
    }
    m.density = RadialDensity::from_name(rest, param);
  } else {
    throw ConfigError("unknown score method '" + s + "'");
  }
  return m;
}

ScorePair method_scores(const TestMethod& m, int k) {
  switch (m.method) {
    case Method::sign: return make_score_pair(ScoreKind::sign, k);
    case Method::spearman: return make_score_pair(ScoreKind::spearman, k);
    case Method::vdw: return make_score_pair(ScoreKind::van_der_waerden, k);
    case Method::laplace: return make_score_pair(ScoreKind::laplace, k);
    case Method::fscore:
      if (!m.density) throw ConfigError("fscore needs a density");
      return make_score_pair(ScoreKind::f_score, k, m.density);
    default: throw ConfigError("method '" + m.tag() + "' has no fixed score pair");
  }
}

Vector project_stack(const StructuralSet& ss, const Vector& stack, int lags) {
  const Eigen::Index kk = static_cast<Eigen::Index>(ss.null.k) * ss.null.k;
  const Eigen::Index rows = kk * lags;
  if (stack.size() < rows) throw DomainError("cross-covariance stack shorter than the lag count");
  return ss.Q.topRows(rows).transpose() * stack.head(rows);
}

double neglected_mass(const StructuralSet& ss, int lags) {
  const Eigen::Index kk = static_cast<Eigen::Index>(ss.null.k) * ss.null.k;
  const double total = ss.Q.squaredNorm();
  if (total == 0.0) return 0.0;
  const Eigen::Index used = std::min<Eigen::Index>(kk * lags, ss.Q.rows());
  return ss.Q.bottomRows(ss.Q.rows() - used).squaredNorm() / total;
}

int effective_lags(const StructuralSet& ss, int n, int max_lag) {
  int cap = n - 1;
  if (max_lag > 0) cap = std::min(cap, max_lag);
  return std::max(1, std::min(cap, ss.active_lags));
}

double quadratic_form(const QuadraticPieces& qp, double* condition) {
  const double cond = spd_condition(qp.j);
  if (condition) *condition = cond;
  if (!std::isfinite(cond) || cond > 1e12)
    throw NumericalError("information matrix is too ill-conditioned (condition " + std::to_string(cond) + ")");
  Eigen::LLT<Matrix> llt(qp.j);
  if (llt.info() != Eigen::Success) throw NumericalError("information matrix is not positive definite");
  return qp.factor * qp.u.dot(llt.solve(qp.u));
}

QuadraticPieces rank_pieces(const StructuralSet& ss, const Series& z, const ScorePair& scores,
                            const TestOptions& opt, Diagnostics* diag) {
  const int n = static_cast<int>(z.cols()), k = static_cast<int>(z.rows());
  if (k != ss.null.k) throw DomainError("residual dimension does not match the null model");
  const TylerFit fit = tyler_fit(z, opt.tyler);
  const RankedResiduals rr = tyler_residuals(fit, z);
  QuadraticPieces qp;
  qp.lags = effective_lags(ss, n, opt.max_lag);
  qp.neglected = neglected_mass(ss, qp.lags);
  CrossCovSeq cc = rank_crosscov_all(scores, rr, fit, qp.lags, opt.exec);
  qp.u = project_stack(ss, cc.stack(), qp.lags);
  qp.j = ss.J(opt.known_sigma ? *opt.known_sigma : fit.sigma, qp.lags, opt.exec);
  qp.factor = static_cast<double>(k) * k / (scores.e_k1_sq * scores.e_k2_sq);
  if (diag) {
    diag->tyler_iterations = fit.iterations;
    diag->tyler_residual = fit.residual;
    diag->e_k1_sq = scores.e_k1_sq;
    diag->e_k2_sq = scores.e_k2_sq;
    if (opt.keep_crosscov) diag->crosscov = std::move(cc.gamma);
  }
  return qp;
}

TestReport statistic_qk(const StructuralSet& ss, const Series& z, const ScorePair& scores, const TestOptions& opt) {
  Diagnostics diag;
  const QuadraticPieces qp = rank_pieces(ss, z, scores, opt, &diag);
  return make_report(ss, qp, scores.tag, opt, std::move(diag));
}

TestReport statistic_qk(const Series& x, const VarmaSpec& null, int p1, int q1, const ScorePair& scores,
                        const TestOptions& opt) {
  const StructuralSet ss = build_structural(null, p1, q1, static_cast<int>(x.cols()));
  return statistic_qk(ss, residuals(null, x), scores, opt);
}

QuadraticPieces gaussian_pieces(const StructuralSet& ss, const Series& z, const TestOptions& opt, Diagnostics* diag) {
  const int n = static_cast<int>(z.cols()), k = static_cast<int>(z.rows());
  if (k != ss.null.k) throw DomainError("residual dimension does not match the null model");
  QuadraticPieces qp;
  qp.lags = effective_lags(ss, n, opt.max_lag);
  qp.neglected = neglected_mass(ss, qp.lags);
  CrossCovSeq cc = gaussian_crosscov_all(z, qp.lags, opt.exec);
  qp.u = project_stack(ss, cc.stack(), qp.lags);

  // Covariance of vec(S^{-1} Z_t Z_{t-1}'): (I (x) S^{-1}) E[vec vec'] (I (x) S^{-1}).
  const Matrix s = z * z.transpose() / n;
  const Eigen::LDLT<Matrix> ldlt(s);
  const Matrix s_inv = ldlt.solve(Matrix::Identity(k, k));
  const int kk = k * k;
  Matrix raw = Matrix::Zero(kk, kk);
  for (int t = 1; t < n; ++t) {
    const Vector v = kron(z.col(t - 1), z.col(t));
    raw.noalias() += v * v.transpose();
  }
  raw /= (n - 1);
  const Matrix left = kron(Matrix::Identity(k, k), s_inv);
  Matrix std_cov = left * raw * left;
  std_cov = 0.5 * (std_cov + std_cov.transpose()).eval();
  qp.j = accumulate_information(ss.Q, std_cov, qp.lags, opt.exec);
  qp.factor = 1.0;
  if (diag && opt.keep_crosscov) diag->crosscov = std::move(cc.gamma);
  return qp;
}

TestReport statistic_gaussian(const StructuralSet& ss, const Series& z, const TestOptions& opt) {
  Diagnostics diag;
  const QuadraticPieces qp = gaussian_pieces(ss, z, opt, &diag);
  return make_report(ss, qp, "gaussian", opt, std::move(diag));
}

TestReport statistic_gaussian(const Series& x, const VarmaSpec& null, int p1, int q1, const TestOptions& opt) {
  const StructuralSet ss = build_structural(null, p1, q1, static_cast<int>(x.cols()));
  return statistic_gaussian(ss, residuals(null, x), opt);
}

TestReport run_test(const StructuralSet& ss, const Series& z, const TestMethod& m, const TestOptions& opt) {
  switch (m.method) {
    case Method::adaptive: return statistic_adaptive(ss, z, opt);
    case Method::gaussian: return statistic_gaussian(ss, z, opt);
    default: return statistic_qk(ss, z, method_scores(m, static_cast<int>(z.rows())), opt);
  }
}

TestReport run_test(const Series& x, const VarmaSpec& null, int p1, int q1, const TestMethod& m,
                    const TestOptions& opt) {
  const StructuralSet ss = build_structural(null, p1, q1, static_cast<int>(x.cols()));
  return run_test(ss, residuals(null, x), m, opt);
}

TestReport make_report(const StructuralSet& ss, const QuadraticPieces& qp, const std::string& tag,
                       const TestOptions& opt, Diagnostics diag) {
  if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
  TestReport rep;
  rep.statistic = quadratic_form(qp, &diag.j_condition);
  const int k = ss.null.k;
  rep.df = k * k * ss.orders.pi0();
  rep.p_value = chi2_sf(rep.df, rep.statistic);
  rep.alpha = opt.alpha;
  rep.reject = rep.statistic > chi2_critical(rep.df, opt.alpha);
  rep.scores = tag;
  rep.n = ss.n;
  rep.k = k;
  rep.orders = ss.orders;
  diag.lags_used = qp.lags;
  diag.neglected_q_mass = qp.neglected;
  diag.d_condition = ss.d.condition;
  diag.d_ill_conditioned = ss.d.ill_conditioned;
  rep.diagnostics = std::move(diag);
  return rep;
}

namespace {

double shift_norm(const Vector& tau, const Matrix& n_mat) {
  if (tau.size() != n_mat.rows()) throw DomainError("tau length does not match N");
  return tau.dot(n_mat * tau);
}

}  // namespace

double noncentrality(const Vector& tau, const Matrix& n_mat, const ScorePair& scores, const RadialLaw& law) {
  const double k = law.dim();
  const double d = dk(scores.k2, law), c = ck(scores.k1, law);
  return shift_norm(tau, n_mat) * d * d * c * c / (k * k * scores.e_k1_sq * scores.e_k2_sq);
}

double noncentrality_gaussian(const Vector& tau, const Matrix& n_mat, const RadialLaw& law) {
  const double k = law.dim();
  const double e = law.mean_d_phi();
  return shift_norm(tau, n_mat) * e * e / (k * k);
}

double noncentrality_adaptive(const Vector& tau, const Matrix& n_mat, const RadialLaw& law) {
  const double k = law.dim();
  const double info = law.fisher_information();
  if (!std::isfinite(info)) throw NumericalError("Fisher information of " + law.density().name() + " is infinite");
  return shift_norm(tau, n_mat) * law.mean_square() * info / (k * k);
}

double noncentrality_for(const TestMethod& m, const Vector& tau, const Matrix& n_mat, const RadialLaw& law) {
  switch (m.method) {
    case Method::gaussian: return noncentrality_gaussian(tau, n_mat, law);
    case Method::adaptive: return noncentrality_adaptive(tau, n_mat, law);
    default: return noncentrality(tau, n_mat, method_scores(m, law.dim()), law);
  }
}

}  // namespace rankvarma
