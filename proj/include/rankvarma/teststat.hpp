#pragma once

#include <optional>
#include <string>

#include "rankvarma/crosscov.hpp"
#include "rankvarma/scores.hpp"
#include "rankvarma/structmat.hpp"
#include "rankvarma/tyler.hpp"

namespace rankvarma {

enum class Method { sign, spearman, vdw, laplace, fscore, adaptive, gaussian };

struct TestMethod {
  Method method = Method::vdw;
  std::optional<RadialDensity> density;  // fscore only
  std::string tag() const;
};

// "sign", "spearman", "vdw", "laplace", "adaptive", "gaussian", "fscore:<density>[:<param>]".
TestMethod parse_method(const std::string& s);
// Score pair of a fixed-score method (not adaptive or gaussian).
ScorePair method_scores(const TestMethod& m, int k);

struct TestOptions {
  double alpha = 0.05;
  TylerOptions tyler;
  int max_lag = -1;  // -1: every lag 1..n-1
  std::optional<double> kde_bandwidth;
  // Oracle mode: build J from this scatter instead of Tyler's estimate.
  std::optional<Matrix> known_sigma;
  bool keep_crosscov = false;
  Exec exec = Exec::parallel;
};

struct Diagnostics {
  int tyler_iterations = 0;
  double tyler_residual = 0.0;
  double j_condition = 0.0;
  int lags_used = 0;
  double neglected_q_mass = 0.0;  // share of squared Q mass in rows past the lag cut
  double d_condition = 1.0;
  bool d_ill_conditioned = false;
  double e_k1_sq = 0.0, e_k2_sq = 0.0;  // score normalizers (I and v for adaptive)
  MatrixSeq crosscov;
};

struct TestReport {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  double alpha = 0.05;
  bool reject = false;
  std::string scores;
  int n = 0, k = 0;
  Orders orders;
  Diagnostics diagnostics;
};

// statistic = factor * u' J^{-1} u with u = Q' S (S the weighted stack).
struct QuadraticPieces {
  Vector u;
  Matrix j;
  double factor = 1.0;
  int lags = 0;
  double neglected = 0.0;
};

// Q' S over the first `lags` row blocks.
Vector project_stack(const StructuralSet& ss, const Vector& stack, int lags);
double neglected_mass(const StructuralSet& ss, int lags);
int effective_lags(const StructuralSet& ss, int n, int max_lag);

// Cholesky solve; NumericalError if J's condition exceeds 1e12.
double quadratic_form(const QuadraticPieces& qp, double* condition = nullptr);

// Fixed-score rank statistic Q_K, from residuals.
QuadraticPieces rank_pieces(const StructuralSet& ss, const Series& z, const ScorePair& scores,
                            const TestOptions& opt, Diagnostics* diag = nullptr);
TestReport statistic_qk(const StructuralSet& ss, const Series& z, const ScorePair& scores, const TestOptions& opt = {});
TestReport statistic_qk(const Series& x, const VarmaSpec& null, int p1, int q1, const ScorePair& scores,
                        const TestOptions& opt = {});

// Gaussian benchmark Q_N.
QuadraticPieces gaussian_pieces(const StructuralSet& ss, const Series& z, const TestOptions& opt,
                                Diagnostics* diag = nullptr);
TestReport statistic_gaussian(const StructuralSet& ss, const Series& z, const TestOptions& opt = {});
TestReport statistic_gaussian(const Series& x, const VarmaSpec& null, int p1, int q1, const TestOptions& opt = {});

// Dispatch on method (adaptive included).
TestReport run_test(const StructuralSet& ss, const Series& z, const TestMethod& m, const TestOptions& opt = {});
TestReport run_test(const Series& x, const VarmaSpec& null, int p1, int q1, const TestMethod& m,
                    const TestOptions& opt = {});

TestReport make_report(const StructuralSet& ss, const QuadraticPieces& qp, const std::string& tag,
                       const TestOptions& opt, Diagnostics diag);

// Local noncentrality parameters tau' N tau times the method's efficiency factor.
double noncentrality(const Vector& tau, const Matrix& n_mat, const ScorePair& scores, const RadialLaw& law);
double noncentrality_gaussian(const Vector& tau, const Matrix& n_mat, const RadialLaw& law);
double noncentrality_adaptive(const Vector& tau, const Matrix& n_mat, const RadialLaw& law);
double noncentrality_for(const TestMethod& m, const Vector& tau, const Matrix& n_mat, const RadialLaw& law);

}  // namespace rankvarma
