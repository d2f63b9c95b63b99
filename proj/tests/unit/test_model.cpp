#include <doctest.h>

#include <array>
#include <complex>

#include "mfvar/errors.hpp"
#include "mfvar/model.hpp"
#include "mfvar/rng.hpp"
#include "oracles.hpp"

using namespace mfvar;

namespace {

VarParameters random_params(int nm, int nq, int p, RngStream& rng, double scale) {
  VarParameters v = VarParameters::zeros(nm, nq, p);
  v.intercept = oracle::random_matrix(nm + nq, 1, rng, 0.3);
  v.lag_coefficients = oracle::random_matrix(nm + nq, (nm + nq) * p, rng, scale);
  return v;
}

}  // namespace

TEST_CASE("companion form of small systems") {
  VarParameters v = VarParameters::zeros(1, 0, 1);
  v.lag(1)(0, 0) = 0.5;
  CompanionForm c = build_companion(v, MatrixXd::Identity(1, 1));
  CHECK(c.transition.rows() == 1);
  CHECK(c.transition(0, 0) == 0.5);

  VarParameters w = VarParameters::zeros(1, 0, 2);
  w.lag(1)(0, 0) = 0.5;
  w.lag(2)(0, 0) = 0.2;
  CompanionForm c2 = build_companion(w, MatrixXd::Identity(1, 1));
  MatrixXd expect(2, 2);
  expect << 0.5, 0.2, 1, 0;
  CHECK(c2.transition == expect);

  CHECK_THROWS_AS(build_companion(w, MatrixXd::Identity(2, 2)), ValidationError);
}

TEST_CASE("companion eigenvalues stay inside the unit circle for a stationary VAR") {
  RngStream rng(5, {1});
  for (int rep = 0; rep < 20; ++rep) {
    VarParameters v = random_params(3, 0, 1, rng, 0.4);
    const double rad = v.spectral_radius();
    if (rad >= 1) continue;
    // brute force on the 3x3 companion (p = 1)
    Eigen::EigenSolver<MatrixXd> es(v.lag(1));
    CHECK(es.eigenvalues().cwiseAbs().maxCoeff() == doctest::Approx(rad).epsilon(1e-12));
    CHECK(es.eigenvalues().cwiseAbs().maxCoeff() < 1.0);
  }
}

TEST_CASE("companion recursion reproduces the direct VAR recursion") {
  RngStream rng(6, {2});
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 1 + rep % 4, p = 1 + rep % 6, T = 40;
    VarParameters v = random_params(n, 0, p, rng, 0.2 / p);
    MatrixXd pre = oracle::random_matrix(p, n, rng);
    MatrixXd e = oracle::random_matrix(T, n, rng);
    MatrixXd path = simulate_var(v, pre, e);
    CompanionForm c = build_companion(v, MatrixXd::Identity(n, n));
    VectorXd s(n * p);
    for (int l = 0; l < p; ++l) s.segment(l * n, n) = pre.row(p - 1 - l).transpose();
    double err = 0;
    for (int t = 0; t < T; ++t) {
      s = c.transition * s + c.intercept + c.innovation_map * e.row(t).transpose();
      err = std::max(err, (s.head(n) - path.row(t).transpose()).cwiseAbs().maxCoeff());
    }
    CHECK(err < 1e-12);
  }
}

TEST_CASE("compact system block layout") {
  RngStream rng(7, {3});
  VarParameters v = random_params(2, 1, 5, rng, 0.1);
  MatrixXd chol = MatrixXd::Identity(3, 3);
  StateSpaceSystem s = build_compact_system(v, chol, build_aggregation_matrix(1, 5));
  CHECK(s.Z.rows() == 3);
  CHECK(s.Z.cols() == 6);
  CHECK(s.state_dim() == 6);
  CHECK(s.n_exog() == 2 * 5 + 1);
  for (int l = 1; l <= 5; ++l) CHECK(s.Z.block(0, l, 2, 1) == v.lag(l).block(0, 2, 2, 1));
  CHECK(s.Z(2, 0) == doctest::Approx(1.0 / 9));
  CHECK(s.Z(2, 2) == doctest::Approx(3.0 / 9));
  CHECK(s.Z(2, 5) == 0.0);
  // quarterly rows of G are zero, H nonzero only in the first n_q rows
  CHECK(s.G.row(2).isZero());
  CHECK(s.H.bottomRows(5).isZero());

  VarParameters z = VarParameters::zeros(2, 1, 5);
  z.intercept << 1, 2, 3;
  StateSpaceSystem s0 = build_compact_system(z, chol, build_aggregation_matrix(1, 5));
  CHECK(s0.C.leftCols(10).isZero());
  CHECK(s0.D.leftCols(10).isZero());
  CHECK(s0.C(1, 10) == 2.0);
  CHECK(s0.D(0, 10) == 3.0);
  MatrixXd shift = MatrixXd::Zero(6, 6);
  shift.block(1, 0, 5, 5).setIdentity();
  CHECK(s0.T == shift);

  CHECK_THROWS_AS(build_compact_system(VarParameters::zeros(3, 0, 5), chol, MatrixXd::Zero(0, 0)), ValidationError);
}

TEST_CASE("compact form simulates the same observations as the companion form") {
  RngStream rng(8, {4});
  for (int p : {5, 6}) {
    const int nm = 10, nq = 2, n = 12, T = 60;
    VarParameters v = random_params(nm, nq, p, rng, 0.05);
    MatrixXd A = oracle::random_matrix(n, n, rng, 0.3);
    MatrixXd Sigma = A * A.transpose() + MatrixXd::Identity(n, n);
    MatrixXd chol = Sigma.llt().matrixL();
    MatrixXd e = oracle::random_matrix(T, n, rng);
    MatrixXd pre = oracle::random_matrix(p, n, rng);
    MatrixXd x = simulate_var(v, pre, e * chol.transpose());
    MatrixXd full(T + p, n);
    full << pre, x;
    StateSpaceSystem s = build_compact_system(v, chol, build_aggregation_matrix(nq, p));
    // state at t0 from the true path; then run the compact recursion
    const int t0 = p;  // row in `full`
    VectorXd a(nq * (p + 1));
    for (int l = 0; l <= p; ++l) a.segment(l * nq, nq) = full.row(t0 - l).tail(nq).transpose();
    double err = 0;
    for (int t = t0 + 1; t < T + p; ++t) {
      VectorXd X(nm * p + 1);
      for (int l = 1; l <= p; ++l) X.segment((l - 1) * nm, nm) = full.row(t - l).head(nm).transpose();
      X(nm * p) = 1.0;
      VectorXd et = e.row(t - p).transpose();
      a = s.T * a + s.D * X + s.H * et;
      VectorXd y = s.Z * a + s.C * X + s.G * et;
      VectorXd expect(n);
      expect.head(nm) = full.row(t).head(nm).transpose();
      for (int j = 0; j < nq; ++j) {
        std::array<double, 5> w{};
        for (int k = 0; k < 5; ++k) w[4 - k] = full(t - k, nm + j);
        expect(nm + j) = aggregate_quarterly(w);
      }
      err = std::max(err, (y - expect).cwiseAbs().maxCoeff());
    }
    CHECK(err < 1e-10);
  }
}

TEST_CASE("triangular aggregation") {
  std::array<double, 5> c{2.5, 2.5, 2.5, 2.5, 2.5};
  CHECK(aggregate_quarterly(c) == doctest::Approx(2.5));
  std::array<double, 5> w{1, 2, 3, 2, 1};
  CHECK(aggregate_quarterly(w) == doctest::Approx(19.0 / 9));
  std::array<double, 5> last{0, 0, 0, 0, 9};
  CHECK(aggregate_quarterly(last) == doctest::Approx(1.0));
  std::array<double, 4> short_window{1, 2, 3, 4};
  CHECK_THROWS_AS(aggregate_quarterly(short_window), ValidationError);
  double sum = 0;
  for (double v : kTriangularWeights) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("aggregation matrix") {
  MatrixXd a = build_aggregation_matrix(1, 5);
  Eigen::RowVectorXd expect(5);
  expect << 1, 2, 3, 2, 1;
  CHECK((a - expect / 9).cwiseAbs().maxCoeff() < 1e-15);
  MatrixXd b = build_aggregation_matrix(2, 5);
  CHECK((b.row(0).array() * b.row(1).array()).cwiseAbs().maxCoeff() == 0.0);
  MatrixXd c = build_aggregation_matrix(1, 6);
  CHECK(c.cols() == 6);
  CHECK(c(0, 5) == 0.0);
  CHECK_THROWS_AS(build_aggregation_matrix(1, 4), ValidationError);
}

TEST_CASE("selection matrices") {
  CHECK(make_selection({0, 1, 2}, 3) == MatrixXd::Identity(3, 3));
  MatrixXd s = make_selection({0, 2}, 3);
  MatrixXd expect(2, 3);
  expect << 1, 0, 0, 0, 0, 1;
  CHECK(s == expect);
  CHECK(make_selection({}, 3).rows() == 0);
  CHECK_THROWS_AS(make_selection({1, 1}, 3), ValidationError);
  CHECK_THROWS_AS(make_selection({3}, 3), ValidationError);
}

TEST_CASE("VAR parameter validation and padding") {
  VarParameters v = VarParameters::zeros(2, 1, 2);
  v.lag(1)(0, 1) = 0.3;
  VarParameters w = v.padded(5);
  CHECK(w.lags == 5);
  CHECK(w.lag(1) == v.lag(1));
  CHECK(w.lag(5).isZero());
  CHECK(v.equation_row(0).size() == 7);
  v.lag_coefficients(0, 0) = std::nan("");
  CHECK_THROWS_AS(v.validate(), ValidationError);
  CHECK_THROWS_AS(VarParameters::zeros(1, 0, 0).validate(), ValidationError);
}
