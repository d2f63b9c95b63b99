#include <doctest.h>

#include <cmath>

#include "mfvar/bench.hpp"
#include "mfvar/diagnostics.hpp"
#include "mfvar/errors.hpp"
#include "mfvar/gibbs.hpp"
#include "oracles.hpp"

using namespace mfvar;

namespace {

VectorXd ar1_chain(Index n, double rho, std::uint64_t seed) {
  RngStream rng(seed, {1});
  VectorXd c(n);
  c(0) = rng.normal() / std::sqrt(1 - rho * rho);
  for (Index t = 1; t < n; ++t) c(t) = rho * c(t - 1) + rng.normal();
  return c;
}

}  // namespace

TEST_CASE("inefficiency factor calibration") {
  const double iid = inefficiency_factor(ar1_chain(10000, 0.0, 1));
  CHECK(iid >= 0.8);
  CHECK(iid <= 1.3);
  const double ar = inefficiency_factor(ar1_chain(100000, 0.9, 2));
  CHECK(std::abs(ar - 19.0) < 0.25 * 19.0);
}

TEST_CASE("inefficiency factor of iid chains approaches one") {
  const std::pair<Index, double> cases[] = {{1000, 0.3}, {10000, 0.1}, {100000, 0.04}};
  for (auto [n, tol] : cases)
    for (std::uint64_t seed = 10; seed < 15; ++seed) CHECK(std::abs(inefficiency_factor(ar1_chain(n, 0.0, seed)) - 1.0) < tol);
}

TEST_CASE("negative autocorrelation gives an inefficiency factor below one") {
  RngStream rng(3, {3});
  VectorXd c(1000);
  for (Index t = 0; t < c.size(); ++t) c(t) = (t % 2 ? 1.0 : -1.0) + 1e-3 * rng.normal();
  CHECK(inefficiency_factor(c) < 1.0);
  CHECK_THROWS_AS(inefficiency_factor(VectorXd::Constant(100, 2.0)), NumericalError);
  CHECK_THROWS_AS(inefficiency_factor(ar1_chain(49, 0.0, 1)), ValidationError);
}

TEST_CASE("autocorrelation estimator") {
  VectorXd c = ar1_chain(50000, 0.5, 4);
  VectorXd r = autocorrelations(c, 3);
  CHECK(r(0) == doctest::Approx(0.5).epsilon(0.05));
  CHECK(r(1) == doctest::Approx(0.25).epsilon(0.1));
}

TEST_CASE("quantiles match the type-7 oracle") {
  RngStream rng(5, {5});
  for (int n : {1, 2, 7, 100}) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal();
    for (double p : {0.0, 0.1, 0.5, 0.75, 0.95, 0.99, 1.0}) CHECK(quantile(v, p) == doctest::Approx(oracle::quantile7(v, p)));
  }
  CHECK(quantile({1, 2, 3, 4}, 0.5) == 2.5);
}

TEST_CASE("group summaries") {
  IfGroupSummary one = summarize_group("regression", {7.5});
  CHECK(one.min == 7.5);
  CHECK(one.p50 == 7.5);
  CHECK(one.p99 == 7.5);
  CHECK(one.max == 7.5);

  std::vector<double> ifs;
  for (int i = 0; i < 40; ++i) ifs.push_back(0.7 * i);
  IfGroupSummary g = summarize_group("loadings", ifs);
  CHECK(g.count == 40);
  CHECK(g.p75 == doctest::Approx(oracle::quantile7(ifs, 0.75)));
  CHECK(g.p95 == doctest::Approx(oracle::quantile7(ifs, 0.95)));
  int above = 0;
  for (double v : ifs) above += v > 20;
  CHECK(g.share_above_20 == doctest::Approx(above / 40.0));
  CHECK(g.min <= g.p50);
  CHECK(g.p50 <= g.p75);
  CHECK(g.p95 <= g.p99);
  CHECK(g.p99 <= g.max);
}

TEST_CASE("inefficiency summary of a chain store") {
  SyntheticSpec spec;
  spec.n_monthly = 3;
  spec.periods = 90;
  SyntheticSystem sys = make_synthetic(spec);
  McmcConfig c;
  c.iterations = 120;
  c.burn_in = 20;
  c.thin = 1;
  c.lags = 5;
  ChainStore store = run_mcmc(c, sys.data, default_priors(sys.data));
  IfSummary s = summarize_if(store);
  REQUIRE(s.groups.size() == if_groups().size());
  for (std::size_t g = 0; g < s.groups.size(); ++g) {
    CHECK(s.groups[g].group == if_groups()[g]);
    for (double v : s.values[g]) CHECK(v >= 0.0);
  }
  CHECK(s.values[1].size() == static_cast<std::size_t>(4 * (4 * 5 + 1)));
  CHECK_THROWS_AS(summarize_if(store, {"unknown"}), ValidationError);
}

TEST_CASE("maximin sign identification") {
  RngStream rng(6, {6});
  MatrixXd pos(50, 3);
  for (Index d = 0; d < 50; ++d) pos.row(d) << 1.0 + 0.1 * rng.normal(), 0.2 * rng.normal(), -2.0 + 0.1 * rng.normal();
  SignIdentification a = identify_sign_maximin(pos);
  CHECK(a.coordinate == 2);
  // coordinate 2 is negative throughout, so every draw flips
  for (int f : a.flips) CHECK(f == -1);

  MatrixXd good = pos;
  good.col(2) *= -1;
  SignIdentification b = identify_sign_maximin(good);
  CHECK(b.loadings == good);

  MatrixXd mixed = good;
  for (Index d = 0; d < 50; d += 2) mixed.row(d) *= -1;
  SignIdentification c = identify_sign_maximin(mixed);
  CHECK((c.loadings.col(c.coordinate).array() > 0).all());
  CHECK(identify_sign_maximin(c.loadings).loadings == c.loadings);

  MatrixXd zero = good;
  zero.row(3).setZero();
  SignIdentification z = identify_sign_maximin(zero);
  CHECK(z.flips[3] == 1);
}

TEST_CASE("joint flips leave the common component unchanged") {
  SyntheticSpec spec;
  spec.n_monthly = 3;
  spec.periods = 90;
  SyntheticSystem sys = make_synthetic(spec);
  McmcConfig c;
  c.iterations = 30;
  c.burn_in = 0;
  c.thin = 1;
  c.lags = 5;
  ChainStore store = run_mcmc(c, sys.data, default_priors(sys.data));
  std::vector<MatrixXd> before;
  for (const auto& d : store.draws) before.push_back(d.factors * d.loadings.transpose());
  apply_sign_identification(store);
  for (std::size_t k = 0; k < store.draws.size(); ++k)
    CHECK((store.draws[k].factors * store.draws[k].loadings.transpose() - before[k]).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("GDP volatility") {
  const Index T = 12;
  std::vector<bool> qe(T);
  for (Index t = 0; t < T; ++t) qe[t] = t % 3 == 2;
  VectorXd lam = VectorXd::Zero(1);
  MatrixXd fv = MatrixXd::Ones(T, 1);
  VectorXd iv = VectorXd::Constant(T, 0.7);
  CHECK((gdp_volatility(lam, fv, iv, qe).monthly_var - iv).cwiseAbs().maxCoeff() < 1e-15);
  lam(0) = 2.0;
  GdpVolatility g = gdp_volatility(lam, fv, VectorXd::Ones(T), qe);
  CHECK((g.monthly_var.array() == 5.0).all());
  CHECK(g.quarterly_sd(8) == doctest::Approx(std::sqrt(19.0 * 5.0 / 81.0)));
  CHECK(std::isnan(g.quarterly_sd(2)));  // window reaches before the sample
  CHECK(std::isnan(g.quarterly_sd(7)));
  GdpVolatility s = gdp_volatility(lam, fv, VectorXd::Ones(T), qe, VolAggregation::sd_weights);
  CHECK(s.quarterly_sd(8) == doctest::Approx(std::sqrt(5.0)));
  RngStream rng(7, {7});
  MatrixXd rfv = oracle::random_matrix(T, 1, rng).array().exp();
  VectorXd riv = oracle::random_matrix(T, 1, rng).array().exp();
  CHECK((gdp_volatility(lam, rfv, riv, qe).monthly_var.array() >= riv.array()).all());
  CHECK_THROWS_AS(gdp_volatility(lam, -fv, riv, qe), ValidationError);
}
