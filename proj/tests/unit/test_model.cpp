#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rankvarma/crosscov.hpp"
#include "rankvarma/elliptical.hpp"
#include "rankvarma/errors.hpp"
#include "rankvarma/linalg.hpp"
#include "rankvarma/scores.hpp"
#include "rankvarma/structmat.hpp"
#include "rankvarma/tyler.hpp"
#include "rankvarma/varma.hpp"

using namespace rankvarma;

namespace {

Matrix random_matrix(CounterRng& rng, int r, int c, double scale = 1.0) {
  Matrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = scale * rng.normal();
  return m;
}

Matrix random_spd(CounterRng& rng, int k) {
  const Matrix a = random_matrix(rng, k, k);
  return a * a.transpose() + k * Matrix::Identity(k, k);
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("elliptical") {
  TEST_CASE("gaussian radial laws") {
    const RadialLaw l1(RadialDensity::gaussian(), 1);
    CHECK(l1.pdf(1e-300) == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-12));
    const RadialLaw l2(RadialDensity::gaussian(), 2);
    for (double r : {0.3, 1.0, 2.7}) CHECK(l2.pdf(r) == doctest::Approx(r * std::exp(-0.5 * r * r)).epsilon(1e-13));
    CHECK(l2.quantile(0.5) == doctest::Approx(std::sqrt(2.0 * std::log(2.0))).epsilon(1e-13));
    CHECK(l2.cdf(0.0) == 0.0);
    CHECK(RadialLaw(RadialDensity::gaussian(), 3).pdf(0.0) == 0.0);
    CHECK(l2.phi(2.5) == doctest::Approx(2.5));
    for (int k : {1, 2, 5}) {
      const RadialLaw l(RadialDensity::gaussian(), k);
      CHECK(l.mean_square() == doctest::Approx(k).epsilon(1e-12));
      CHECK(l.fisher_information() == doctest::Approx(k).epsilon(1e-12));
      CHECK(l.mean_d_phi() == doctest::Approx(k).epsilon(1e-10));
    }
  }

  TEST_CASE("laplace, student and power-exponential") {
    const RadialLaw lap(RadialDensity::laplace(), 1);
    CHECK(lap.quantile(1.0 - std::exp(-1.0)) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(lap.phi(0.4) == 1.0);
    CHECK(lap.phi(7.0) == 1.0);
    const RadialLaw t5(RadialDensity::student(5.0), 3);
    CHECK(t5.mean_square() == doctest::Approx(3.0 * 5.0 / 3.0).epsilon(1e-9));
    const RadialLaw t1(RadialDensity::student(1.0), 2);
    CHECK_FALSE(t1.moment_finite(3.0));
    // nu = 1 is the gaussian exp(-r^2 / c0), i.e. the gaussian generator rescaled by sqrt(c0 / 2)
    const RadialLaw pe(RadialDensity::power_exponential(1.0), 2);
    const RadialLaw g(RadialDensity::gaussian(), 2);
    const double c = std::sqrt(pe.c0() / 2.0);
    for (double u : {0.1, 0.5, 0.9}) CHECK(pe.quantile(u) == doctest::Approx(c * g.quantile(u)).epsilon(1e-10));
  }

  TEST_CASE("quantile inverts the cdf, also in the far upper tail") {
    for (const auto& d : {RadialDensity::gaussian(), RadialDensity::laplace(), RadialDensity::student(3.0),
                          RadialDensity::power_exponential(0.4)})
      for (int k : {1, 2, 4}) {
        const RadialLaw l(d, k);
        for (double u : {1e-6, 0.2, 0.5, 0.97}) CHECK(l.cdf(l.quantile(u)) == doctest::Approx(u).epsilon(1e-10));
        CHECK(l.sf(l.quantile_upper(1e-15)) == doctest::Approx(1e-15).epsilon(1e-8));
      }
  }

  TEST_CASE("tabulated density follows its nodes") {
    std::vector<double> r, f;
    for (int i = 0; i <= 400; ++i) {
      r.push_back(i * 0.02);
      f.push_back(std::exp(-0.5 * r.back() * r.back()));
    }
    const RadialLaw tab(RadialDensity::tabulated(r, f), 2);
    const RadialLaw g(RadialDensity::gaussian(), 2);
    for (double u : {0.1, 0.5, 0.9}) CHECK(tab.quantile(u) == doctest::Approx(g.quantile(u)).epsilon(2e-3));
    CHECK_THROWS_AS(RadialDensity::tabulated({0.0, 1.0, 0.5}, {1.0, 0.5, 0.2}), ConfigError);
  }

  TEST_CASE("gaussian sample covariance") {
    CounterRng rng(11, 0);
    const Matrix sigma = random_spd(rng, 3);
    const int n = 100000;
    const Series x = sample_elliptical(RadialLaw(RadialDensity::gaussian(), 3), sigma, n, rng);
    const Matrix s = x * x.transpose() / n;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double se = std::sqrt((sigma(i, i) * sigma(j, j) + sigma(i, j) * sigma(i, j)) / n);
        CHECK(std::abs(s(i, j) - sigma(i, j)) < 4.0 * se);
      }
    CHECK(sample_elliptical(RadialLaw(RadialDensity::gaussian(), 3), sigma, 0, rng).cols() == 0);
  }
}

TEST_SUITE("scores") {
  TEST_CASE("score normalizers") {
    const auto vdw = make_score_pair(ScoreKind::van_der_waerden, 2);
    CHECK(vdw.k1(0.5) == doctest::Approx(std::sqrt(2.0 * std::log(2.0))).epsilon(1e-13));
    CHECK(vdw.k2(0.5) == doctest::Approx(std::sqrt(2.0 * std::log(2.0))).epsilon(1e-13));
    CHECK(vdw.e_k1_sq == doctest::Approx(2.0).epsilon(1e-10));
    const auto sign = make_score_pair(ScoreKind::sign, 3);
    CHECK(sign.e_k1_sq == 1.0);
    CHECK(sign.e_k2_sq == 1.0);
    const auto sp = make_score_pair(ScoreKind::spearman, 3);
    CHECK(sp.e_k1_sq == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(sp.k2.mean_square() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    const auto lap = make_score_pair(ScoreKind::laplace, 2);
    CHECK(lap.e_k1_sq == doctest::Approx(lap.k1.mean_square()).epsilon(1e-10));
    // upper() evaluates K(1 - s) without cancellation
    CHECK(vdw.k2.upper(1e-12) == doctest::Approx(std::sqrt(-2.0 * std::log(1e-12))).epsilon(1e-12));
  }
}

TEST_SUITE("varma") {
  TEST_CASE("root moduli of the AR and MA polynomials") {
    VarmaSpec s;
    s.k = 2;
    s.ar = {0.5 * Matrix::Identity(2, 2)};
    auto rep = check_roots(s);
    CHECK(rep.passes);
    CHECK(rep.ar_min_root_modulus == doctest::Approx(2.0).epsilon(1e-10));
    s.ar = {Matrix::Identity(2, 2)};
    CHECK_FALSE(check_roots(s).passes);
    CHECK(check_roots(VarmaSpec::white_noise(3)).passes);
  }

  TEST_CASE("green matrices") {
    VarmaSpec s;
    s.k = 2;
    s.ma = {0.5 * Matrix::Identity(2, 2)};
    const auto h = green_ma(s, 6);
    for (int u = 0; u <= 6; ++u) CHECK(max_abs(h[u] - std::pow(-0.5, u) * Matrix::Identity(2, 2)) < 1e-15);
    Matrix nil = Matrix::Zero(2, 2);
    nil(0, 1) = 0.5;
    s.ma = {nil};
    const auto hn = green_ma(s, 4);
    CHECK(max_abs(hn[1] + nil) == 0.0);
    for (int u = 2; u <= 4; ++u) CHECK(max_abs(hn[u]) == 0.0);
    const auto h0 = green_ma(VarmaSpec::white_noise(2), 3);
    CHECK(max_abs(h0[0] - Matrix::Identity(2, 2)) == 0.0);
    CHECK(max_abs(h0[3]) == 0.0);
  }

  TEST_CASE("residual recursion by hand") {
    VarmaSpec s;
    s.k = 1;
    s.ar = {Matrix::Constant(1, 1, 0.3)};
    Series x(1, 3);
    x << 1.0, 2.0, -1.0;
    const Series z = residuals(s, x);
    CHECK(z(0, 0) == 1.0);
    CHECK(z(0, 1) == doctest::Approx(2.0 - 0.3));
    CHECK(z(0, 2) == doctest::Approx(-1.0 - 0.6));
    VarmaSpec m;
    m.k = 1;
    m.ma = {Matrix::Constant(1, 1, 0.4)};
    Series y(1, 2);
    y << 1.5, 0.5;
    const Series e = residuals(m, y);
    CHECK(e(0, 0) == 1.5);
    CHECK(e(0, 1) == doctest::Approx(0.5 - 0.4 * 1.5));
  }

  TEST_CASE("simulate then residuals is the identity") {
    CounterRng rng(5, 0);
    VarmaSpec s;
    s.k = 3;
    s.ar = {0.3 * Matrix::Identity(3, 3) + random_matrix(rng, 3, 3, 0.05), random_matrix(rng, 3, 3, 0.05)};
    s.ma = {random_matrix(rng, 3, 3, 0.1)};
    const Series eps = random_matrix(rng, 3, 400);
    CHECK(max_abs(residuals(s, simulate(s, eps)) - eps) < 1e-12);
    CHECK(max_abs(simulate(VarmaSpec::white_noise(3), eps) - eps) == 0.0);
    CHECK(simulate(s, eps, 100).cols() == 300);
  }

  TEST_CASE("perturb pads orders and scales by root n") {
    VarmaSpec s;
    s.k = 2;
    s.ar = {0.2 * Matrix::Identity(2, 2)};
    Vector tau = Vector::LinSpaced(12, 1.0, 12.0);
    const VarmaSpec p = perturb(s, 2, 1, tau, 100);
    CHECK(p.p() == 2);
    CHECK(p.q() == 1);
    CHECK(p.ar[0](0, 0) == doctest::Approx(0.2 + 0.1));
    CHECK(p.ar[1](1, 1) == doctest::Approx(0.8));
    CHECK(p.ma[0](0, 1) == doctest::Approx(1.1));
    CHECK_THROWS_AS(perturb(s, 2, 1, Vector::Ones(5), 100), DomainError);
  }
}

TEST_SUITE("tyler") {
  TEST_CASE("cross of unit points gives the identity") {
    Series z(2, 4);
    z << 1, -1, 0, 0, 0, 0, 1, -1;
    const TylerFit fit = tyler_fit(z);
    CHECK(max_abs(fit.c - Matrix::Identity(2, 2)) < 1e-14);
  }

  TEST_CASE("fixed point, per-point rescaling and consistency") {
    CounterRng rng(21, 0);
    const Matrix sigma = random_spd(rng, 3);
    Series z = sample_elliptical(RadialLaw(RadialDensity::student(2.0), 3), sigma, 2000, rng);
    const TylerFit fit = tyler_fit(z);
    CHECK(fit.c(0, 0) == 1.0);
    CHECK(tyler_fixed_point_residual(fit.c, z) < 1e-10);
    Series scaled = z;
    for (Eigen::Index t = 0; t < z.cols(); ++t) scaled.col(t) *= std::exp(rng.normal());
    CHECK(max_abs(tyler_fit(scaled).c - fit.c) < 1e-10);
    const Matrix a = fit.sigma / fit.sigma.trace(), b = sigma / sigma.trace();
    CHECK((a - b).norm() / b.norm() < 0.1);
  }

  TEST_CASE("affine map leaves the direction Gram matrix and ranks unchanged") {
    CounterRng rng(22, 0);
    const Series z = sample_elliptical(RadialLaw(RadialDensity::gaussian(), 3), Matrix::Identity(3, 3), 300, rng);
    const Matrix m = random_matrix(rng, 3, 3) + 2.0 * Matrix::Identity(3, 3);
    const Series mz = m * z;
    const auto r1 = tyler_residuals(tyler_fit(z), z);
    const auto r2 = tyler_residuals(tyler_fit(mz), mz);
    CHECK(max_abs(r1.w.transpose() * r1.w - r2.w.transpose() * r2.w) < 1e-10);
    CHECK(r1.ranks == r2.ranks);
  }

  TEST_CASE("monotone radial map keeps directions and ranks") {
    CounterRng rng(23, 0);
    const Series z = sample_elliptical(RadialLaw(RadialDensity::gaussian(), 2), Matrix::Identity(2, 2), 200, rng);
    const TylerFit fit = tyler_fit(z);
    const auto rr = tyler_residuals(fit, z);
    Series g = z;
    for (Eigen::Index t = 0; t < z.cols(); ++t) g.col(t) *= rr.d(t) * rr.d(t);  // d -> d^3
    const auto rg = tyler_residuals(tyler_fit(g), g);
    CHECK(max_abs(rg.w - rr.w) < 1e-12);
    CHECK(rg.ranks == rr.ranks);
  }

  TEST_CASE("k = 1 reduces to signs and ranks of absolute values") {
    Series z(1, 5);
    z << -2.0, 0.5, 3.0, -0.1, 1.0;
    const auto rr = tyler_residuals(tyler_fit(z), z);
    CHECK(rr.w(0, 0) == -1.0);
    CHECK(rr.w(0, 1) == 1.0);
    CHECK(rr.ranks == std::vector<int>{4, 2, 5, 1, 3});
    CHECK(ranks_by_value(Vector::Constant(3, 1.0)) == std::vector<int>{1, 2, 3});
  }
}

TEST_SUITE("crosscov") {
  TEST_CASE("serial and parallel lagged products are bit identical") {
    CounterRng rng(31, 0);
    const int n = 500;
    const Vector a = random_matrix(rng, n, 1), b = random_matrix(rng, n, 1);
    const Series w = random_matrix(rng, 3, n);
    const auto s = lagged_products(a, b, w, n - 1, Exec::serial);
    const auto p = lagged_products(a, b, w, n - 1, Exec::parallel);
    REQUIRE(s.size() == p.size());
    for (std::size_t i = 0; i < s.size(); ++i) CHECK((s[i].array() == p[i].array()).all());
    // single term at lag n - 1
    CHECK(max_abs(s.back() - a(n - 1) * b(0) * w.col(n - 1) * w.col(0).transpose()) < 1e-15);
  }

  TEST_CASE("two sign products in k = 1") {
    Series z(1, 2);
    z << 0.7, -1.3;
    TylerFit fit;
    fit.c = Matrix::Identity(1, 1);
    fit.sigma = Matrix::Identity(1, 1);
    const auto rr = tyler_residuals(fit, z);
    CHECK(rank_crosscov(make_score_pair(ScoreKind::sign, 1), rr, fit, 1)(0, 0) == -1.0);
  }

  TEST_CASE("gaussian parametric version is the ordinary cross-covariance") {
    CounterRng rng(32, 0);
    const int n = 200;
    const Series z = random_matrix(rng, 2, n);
    const Matrix g = parametric_crosscov(RadialLaw(RadialDensity::gaussian(), 2), Matrix::Identity(2, 2), z, 3);
    Matrix ref = Matrix::Zero(2, 2);
    for (int t = 3; t < n; ++t) ref += z.col(t) * z.col(t - 3).transpose();
    ref /= (n - 3);
    CHECK(max_abs(g - ref) < 1e-13);
  }

  TEST_CASE("stack layout") {
    MatrixSeq gs = {Matrix::Constant(2, 2, 1.0), Matrix::Constant(2, 2, 2.0)};
    const Vector s = crosscov_stack(gs, 10);
    CHECK(s.size() == 8);
    CHECK(s(0) == doctest::Approx(3.0));
    CHECK(s(7) == doctest::Approx(2.0 * std::sqrt(8.0)));
    CHECK(crosscov_stack({Matrix::Zero(2, 2)}, 10).norm() == 0.0);
  }

  TEST_CASE("monotone radial transform leaves the rank cross-covariance unchanged") {
    CounterRng rng(33, 0);
    const Series z = sample_elliptical(RadialLaw(RadialDensity::laplace(), 2), Matrix::Identity(2, 2), 300, rng);
    const auto scores = make_score_pair(ScoreKind::van_der_waerden, 2);
    const TylerFit f1 = tyler_fit(z);
    const auto r1 = tyler_residuals(f1, z);
    Series g = z;
    for (Eigen::Index t = 0; t < z.cols(); ++t) g.col(t) *= std::exp(r1.d(t));
    const TylerFit f2 = tyler_fit(g);
    const auto r2 = tyler_residuals(f2, g);
    for (int lag : {1, 4}) CHECK(max_abs(rank_crosscov(scores, r1, f1, lag) - rank_crosscov(scores, r2, f2, lag)) < 1e-10);
  }
}

TEST_SUITE("structmat") {
  TEST_CASE("degrees of freedom") {
    VarmaSpec s;
    s.k = 2;
    s.ar = {0.3 * Matrix::Identity(2, 2)};
    s.ma = {0.2 * Matrix::Identity(2, 2)};
    CHECK(make_orders(s, 1, 1).pi0() == 2);
    CHECK(make_orders(VarmaSpec::white_noise(2), 1, 0).pi0() == 1);
    CHECK_THROWS(make_orders(s, 0, 1));
  }

  TEST_CASE("operator D for pure AR and pure MA nulls") {
    VarmaSpec a;
    a.k = 2;
    a.ar = {0.6 * Matrix::Identity(2, 2)};
    CHECK(max_abs(operator_d(a).d[0] + 0.6 * Matrix::Identity(2, 2)) < 1e-12);
    VarmaSpec b;
    b.k = 2;
    b.ma = {0.4 * Matrix::Identity(2, 2)};
    CHECK(max_abs(operator_d(b).d[0] - 0.4 * Matrix::Identity(2, 2)) < 1e-12);
    CHECK(operator_d(VarmaSpec::white_noise(2)).d.empty());
  }

  TEST_CASE("scalar fundamental system is geometric") {
    const FundamentalSystem fs = fundamental_system({Matrix::Constant(1, 1, -0.5)}, 1, 2, 12);
    CHECK(max_abs(fs.casorati() - Matrix::Identity(1, 1)) == 0.0);
    for (int t = 3; t <= 12; ++t) CHECK(fs.rows[t - 3](0, 0) == doctest::Approx(std::pow(0.5, t - 3)).epsilon(1e-14));
  }

  TEST_CASE("white-noise null: Q is a leading identity block and J = Q'Q at identity scatter") {
    const StructuralSet ss = build_structural(VarmaSpec::white_noise(2), 1, 0, 50);
    CHECK(ss.Q.cols() == 4);
    CHECK(max_abs(ss.Q.topRows(4) - Matrix::Identity(4, 4)) == 0.0);
    CHECK(ss.Q.bottomRows(ss.Q.rows() - 4).norm() == 0.0);
    CHECK(ss.active_lags == 1);
    CHECK(max_abs(ss.J(Matrix::Identity(2, 2)) - ss.Q.transpose() * ss.Q) < 1e-14);
  }

  TEST_CASE("M has full column rank, J is SPD and scale free") {
    CounterRng rng(41, 0);
    for (int inst = 0; inst < 5; ++inst) {
      VarmaSpec s;
      s.k = 2;
      s.ar = {0.4 * Matrix::Identity(2, 2) + random_matrix(rng, 2, 2, 0.1)};
      s.ma = {random_matrix(rng, 2, 2, 0.15)};
      REQUIRE(check_roots(s).passes);
      const StructuralSet ss = build_structural(s, 2, 1, 120);
      const Eigen::JacobiSVD<Matrix> svd(ss.M);
      const auto sv = svd.singularValues();
      CHECK(sv(sv.size() - 1) / sv(0) > 1e-10);
      CHECK(ss.M.rows() == 4 * ss.orders.pi0());
      const Matrix sigma = random_spd(rng, 2);
      const Matrix j = ss.J(sigma);
      CHECK(spd_condition(j) < 1e10);
      CHECK(max_abs(ss.J(4.0 * sigma) - j) == 0.0);
    }
  }

  TEST_CASE("Q decays like the Green sequences") {
    VarmaSpec s;
    s.k = 1;
    s.ar = {Matrix::Constant(1, 1, 0.5)};
    const StructuralSet ss = build_structural(s, 2, 0, 200);
    CHECK(ss.Q.row(ss.Q.rows() - 1).norm() < 1e-12);
  }
}
