#include <doctest.h>

#include <cmath>

#include "mfvar/errors.hpp"
#include "mfvar/regression.hpp"
#include "oracles.hpp"

using namespace mfvar;

namespace {

EquationSystem random_system(Index T, Index k, RngStream& rng) {
  EquationSystem s;
  s.design = oracle::random_matrix(T, k, rng);
  s.response = oracle::random_matrix(T, 1, rng, 2.0);
  s.prior_var = oracle::random_matrix(k, 1, rng).array().exp();
  return s;
}

}  // namespace

TEST_CASE("derandomized samplers return the dense posterior mean") {
  RngStream rng(1, {1});
  double worst = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const Index k = 1 + rep % 30, T = 5 + (rep * 13) % 60;
    EquationSystem s = random_system(T, k, rng);
    VectorXd mean;
    MatrixXd cov;
    oracle::gls_posterior(s.design, s.response, s.prior_var, mean, cov);
    VectorXd a = draw_row_rue(s, VectorXd::Zero(k));
    VectorXd b = draw_row_bhattacharya(s, VectorXd::Zero(k), VectorXd::Zero(T));
    worst = std::max({worst, (a - mean).cwiseAbs().maxCoeff(), (b - mean).cwiseAbs().maxCoeff()});
    CHECK((posterior_mean_dense(s) - mean).cwiseAbs().maxCoeff() < 1e-8);
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("closed form with an orthonormal design") {
  RngStream rng(2, {2});
  MatrixXd q = Eigen::HouseholderQR<MatrixXd>(oracle::random_matrix(20, 4, rng)).householderQ() *
               MatrixXd::Identity(20, 4);
  EquationSystem s{q, oracle::random_matrix(20, 1, rng), VectorXd::Ones(4)};
  CHECK((draw_row_rue(s, VectorXd::Zero(4)) - q.transpose() * s.response / 2).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((posterior_cov_dense(s) - MatrixXd::Identity(4, 4) / 2).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Rue draws have the posterior covariance") {
  RngStream rng(3, {3});
  EquationSystem s = random_system(15, 3, rng);
  MatrixXd V = posterior_cov_dense(s);
  const int N = 50000;
  MatrixXd d(N, 3);
  for (int i = 0; i < N; ++i) d.row(i) = draw_row_rue(s, rng).transpose();
  MatrixXd c = d.rowwise() - d.colwise().mean();
  MatrixXd cov = c.transpose() * c / (N - 1);
  CHECK((cov - V).norm() < 0.05 * V.norm());
}

TEST_CASE("Rue and Bhattacharya draws share a distribution") {
  RngStream rng(4, {4});
  EquationSystem s = random_system(6, 4, rng);
  const int N = 20000;
  std::vector<std::vector<double>> a(4), b(4);
  for (int i = 0; i < N; ++i) {
    VectorXd x = draw_row_rue(s, rng), y = draw_row_bhattacharya(s, rng);
    for (int j = 0; j < 4; ++j) {
      a[j].push_back(x(j));
      b[j].push_back(y(j));
    }
  }
  for (int j = 0; j < 4; ++j) CHECK(oracle::ks_pvalue(a[j], b[j]) > 0.001);
}

TEST_CASE("dogmatic prior pins the draw at zero") {
  RngStream rng(5, {5});
  EquationSystem s = random_system(30, 5, rng);
  s.prior_var.setConstant(1e-14);
  CHECK(draw_row_bhattacharya(s, rng).cwiseAbs().maxCoeff() < 1e-5);
  CHECK(draw_row_rue(s, rng).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("equation system standardisation") {
  RngStream rng(6, {6});
  const int T = 30, n = 2, p = 2;
  MatrixXd x = oracle::random_matrix(T, n, rng);
  MatrixXd zero = MatrixXd::Zero(T - p, n);
  VectorXd pv = VectorXd::Ones(1 + n * p);
  EquationSystem a = build_equation_system(1, x, p, zero, MatrixXd::Ones(T - p, n), pv);
  EquationSystem b = build_equation_system(1, x, p, zero, MatrixXd::Constant(T - p, n, 4.0), pv);
  CHECK((b.design - a.design / 2).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((b.response - a.response / 2).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(a.design(0, 0) == 1.0);
  CHECK(a.design(0, 1) == x(1, 0));
  CHECK(a.design(0, 1 + n) == x(0, 0));
  CHECK(a.response(0) == x(2, 1));

  // heteroskedastic GLS on the unstandardised system
  MatrixXd iv = oracle::random_matrix(T - p, n, rng).array().exp();
  MatrixXd fp = oracle::random_matrix(T - p, n, rng);
  EquationSystem h = build_equation_system(0, x, p, fp, iv, pv);
  MatrixXd X = build_regressors(x, p);
  VectorXd y = x.col(0).tail(T - p) - fp.col(0);
  MatrixXd W = iv.col(0).cwiseInverse().asDiagonal();
  MatrixXd prec = X.transpose() * W * X;
  prec.diagonal() += pv.cwiseInverse();
  VectorXd want = prec.ldlt().solve(X.transpose() * W * y);
  CHECK((posterior_mean_dense(h) - want).cwiseAbs().maxCoeff() < 1e-10);

  MatrixXd neg = MatrixXd::Ones(T - p, n);
  neg(3, 0) = 0.0;
  CHECK_THROWS(build_equation_system(0, x, p, zero, neg, pv));
}

TEST_CASE("automatic sampler choice") {
  CHECK(choose_sampler(3, 199, SamplerPolicy::automatic) == SamplerPolicy::rue);
  CHECK(choose_sampler(119 * 6 + 1, 460, SamplerPolicy::automatic) == SamplerPolicy::bhattacharya);
  CHECK(choose_sampler(10, 10, SamplerPolicy::automatic) == SamplerPolicy::rue);
  CHECK(choose_sampler(11, 10, SamplerPolicy::automatic) == SamplerPolicy::bhattacharya);
  CHECK(choose_sampler(500, 10, SamplerPolicy::rue) == SamplerPolicy::rue);
  CHECK(parse_policy("auto") == SamplerPolicy::automatic);
  CHECK_THROWS_AS(parse_policy("cholesky"), ValidationError);
}

TEST_CASE("Pi draws do not depend on the worker count") {
  RngStream rng(7, {7});
  const int T = 60, n = 5, p = 3;
  MatrixXd x = oracle::random_matrix(T, n, rng);
  MatrixXd fp = oracle::random_matrix(T - p, n, rng, 0.1);
  MatrixXd iv = oracle::random_matrix(T - p, n, rng).array().exp();
  std::vector<VectorXd> pv(n, VectorXd::Constant(1 + n * p, 0.5));
  RegressionInputs in{&x, p, &fp, &iv, &pv};
  StreamKey key{11, 2, 5};
  for (SamplerPolicy pol : {SamplerPolicy::automatic, SamplerPolicy::rue, SamplerPolicy::bhattacharya}) {
    MatrixXd ref = draw_pi_serial(in, pol, key);
    for (int w : {1, 4, 10}) CHECK(draw_pi(in, pol, w, key) == ref);
  }
  StreamKey other{11, 2, 6};
  CHECK(draw_pi(in, SamplerPolicy::rue, 1, other) != draw_pi(in, SamplerPolicy::rue, 1, key));
}

TEST_CASE("posterior contraction on a long homoskedastic sample") {
  RngStream rng(8, {8});
  const int T = 2000, n = 3, p = 2;
  VarParameters truth = VarParameters::zeros(n, 0, p);
  truth.intercept << 0.1, -0.2, 0.3;
  truth.lag_coefficients = oracle::random_matrix(n, n * p, rng, 0.15);
  MatrixXd x = simulate_var(truth, MatrixXd::Zero(p, n), oracle::random_matrix(T, n, rng));
  MatrixXd fp = MatrixXd::Zero(T - p, n), iv = MatrixXd::Ones(T - p, n);
  int covered = 0, total = 0;
  for (int i = 0; i < n; ++i) {
    EquationSystem s = build_equation_system(i, x, p, fp, iv, VectorXd::Constant(1 + n * p, 10.0));
    VectorXd m = posterior_mean_dense(s);
    VectorXd sd = posterior_cov_dense(s).diagonal().cwiseSqrt();
    VectorXd t = truth.equation_row(i);
    for (Index k = 0; k < m.size(); ++k) {
      covered += std::abs(m(k) - t(k)) < 3 * sd(k);
      ++total;
    }
  }
  CHECK(covered >= 0.99 * total);
}
