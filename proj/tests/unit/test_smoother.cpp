#include <doctest.h>

#include <cmath>

#include "mfvar/errors.hpp"
#include "mfvar/smoother.hpp"
#include "oracles.hpp"

using namespace mfvar;

namespace {

constexpr SmootherVariant kVariants[] = {SmootherVariant::companion, SmootherVariant::adaptive,
                                         SmootherVariant::adaptive_univariate, SmootherVariant::full_companion};

struct Fixture {
  VarParameters params;
  MixedFrequencyDataset data;
  SmootherConditioning cond;
};

// Ragged tail: monthly series j is missing for the last `gaps[j]` periods, and
// the last quarterly value is withheld when `drop_last_quarter`.
Fixture make_fixture(int nm, int nq, int p, int T, std::vector<int> gaps, bool drop_last_quarter,
                     std::uint64_t seed) {
  RngStream rng(seed, {99});
  Fixture f;
  const int n = nm + nq;
  f.params = VarParameters::zeros(nm, nq, p);
  f.params.intercept = oracle::random_matrix(n, 1, rng, 0.2);
  f.params.lag_coefficients = oracle::random_matrix(n, n * p, rng, 0.25 / (n * std::sqrt(p)));
  for (int i = 0; i < n; ++i) f.params.lag(1)(i, i) = 0.4;
  MatrixXd m = oracle::random_matrix(T, nm, rng);
  for (int j = 0; j < nm; ++j)
    for (int t = T - gaps[j]; t < T; ++t) m(t, j) = kMissing;
  MatrixXd q = MatrixXd::Constant(T, nq, kMissing);
  int last_qe = -1;
  for (int t = 0; t < T; ++t)
    if (t % 3 == 2) {
      last_qe = t;
      for (int j = 0; j < nq; ++j) q(t, j) = rng.normal();
    }
  if (drop_last_quarter) q.row(last_qe).setConstant(kMissing);
  f.data = MixedFrequencyDataset(m, q, 2);
  f.cond.shift = oracle::random_matrix(T, n, rng, 0.3);
  f.cond.idio_var = MatrixXd::Constant(T, n, 0.5) + 0.5 * oracle::random_matrix(T, n, rng).cwiseAbs();
  return f;
}

}  // namespace

TEST_CASE("smoothed means of every variant match the joint Gaussian oracle") {
  for (int p : {5, 3, 7}) {
    Fixture f = make_fixture(2, 1, p, 30, {0, 2}, true, 10 + p);
    const double kappa = 50.0;
    MixedFrequencySmoother sm(f.params, f.data, kappa);
    oracle::LatentModel lm = oracle::latent_model(f.params, f.data, f.cond, kappa);
    oracle::GaussianConditional g = oracle::condition(lm.x, lm.obs, lm.y);
    const int n = 3;
    for (SmootherVariant v : kVariants) {
      CAPTURE(variant_name(v));
      SmootherDraw d = sm.smoothed_mean(v, f.cond);
      double err = 0;
      for (int t = 0; t < 30; ++t)
        for (int j = 0; j < n; ++j) err = std::max(err, std::abs(d.x(t, j) - g.mean(t * n + j, 0)));
      CHECK(err < 1e-7);
      CHECK(d.loglik == doctest::Approx(g.loglik).epsilon(1e-8));
    }
  }
}

TEST_CASE("two quarterly series with a balanced panel") {
  Fixture f = make_fixture(3, 2, 5, 27, {0, 0, 0}, false, 21);
  MixedFrequencySmoother sm(f.params, f.data, 100.0);
  oracle::LatentModel lm = oracle::latent_model(f.params, f.data, f.cond, 100.0);
  oracle::GaussianConditional g = oracle::condition(lm.x, lm.obs, lm.y);
  for (SmootherVariant v : kVariants) {
    SmootherDraw d = sm.smoothed_mean(v, f.cond);
    double err = 0;
    for (int t = 0; t < 27; ++t)
      for (int j = 0; j < 5; ++j) err = std::max(err, std::abs(d.x(t, j) - g.mean(t * 5 + j, 0)));
    CHECK(err < 1e-7);
  }
}

TEST_CASE("draws honour the data and the aggregation constraint") {
  Fixture f = make_fixture(3, 1, 6, 40, {1, 0, 2}, false, 31);
  MixedFrequencySmoother sm(f.params, f.data);
  for (SmootherVariant v : kVariants) {
    for (int rep = 0; rep < 3; ++rep) {
      RngStream rng = make_stream(5, 0, rep, Block::latent);
      MatrixXd x = sm.draw(v, f.cond, rng).x;
      MatrixXd agg = sm.observe_quarterly(x);
      double err = 0;
      for (int t = 0; t < 40; ++t) {
        for (int j : f.data.pattern(t).quarterly) err = std::max(err, std::abs(agg(t, j) - f.data.quarterly()(t, j)));
        for (int j : f.data.pattern(t).monthly) err = std::max(err, std::abs(x(t, j) - f.data.monthly()(t, j)));
      }
      CHECK(err < 1e-8);
      CHECK(x.allFinite());
    }
  }
}

TEST_CASE("every variant gives the same draw from the same stream") {
  Fixture f = make_fixture(4, 1, 5, 45, {0, 1, 2, 1}, true, 41);
  MixedFrequencySmoother sm(f.params, f.data);
  RngStream r0 = make_stream(9, 0, 1, Block::latent);
  MatrixXd ref = sm.draw(SmootherVariant::full_companion, f.cond, r0).x;
  for (SmootherVariant v : kVariants) {
    RngStream r = make_stream(9, 0, 1, Block::latent);
    MatrixXd x = sm.draw(v, f.cond, r).x;
    CHECK((x - ref).cwiseAbs().maxCoeff() < 1e-8);
  }
  RngStream r1 = make_stream(9, 0, 1, Block::latent);
  RngStream r2 = make_stream(9, 0, 1, Block::latent);
  CHECK(sm.draw(SmootherVariant::adaptive_univariate, f.cond, r1).x ==
        sm.draw(SmootherVariant::adaptive_univariate, f.cond, r2).x);
}

TEST_CASE("adaptive augmentation dimensions") {
  Fixture bal = make_fixture(3, 1, 5, 30, {0, 0, 0}, false, 51);
  MixedFrequencySmoother s0(bal.params, bal.data);
  for (const StateLayout& l : s0.layouts(SmootherVariant::adaptive)) {
    CHECK(l.dim() == 6);
    CHECK_FALSE(l.companion);
  }

  Fixture one = make_fixture(3, 1, 5, 30, {0, 2, 0}, false, 52);
  MixedFrequencySmoother s1(one.params, one.data);
  auto lays = s1.layouts(SmootherVariant::adaptive);
  CHECK(lays[lays.size() - 3].dim() == 6);
  CHECK(lays[lays.size() - 2].dim() == 7);  // x_{1,T-2}
  CHECK(lays.back().dim() == 8);            // and its value one period later
  CHECK(lays.back().locate(1, 29) >= 6);
  CHECK(lays.back().locate(0, 29) == -1);

  Fixture all = make_fixture(3, 1, 5, 30, {1, 1, 1}, false, 53);
  MixedFrequencySmoother s2(all.params, all.data);
  CHECK(s2.layouts(SmootherVariant::adaptive).back().dim() == 6 + 3);
  auto comp = s2.layouts(SmootherVariant::companion);
  CHECK(comp.back().companion);
  CHECK(comp.back().dim() == 4 * 5);
  CHECK_FALSE(comp.front().companion);
}

TEST_CASE("smoother input validation") {
  Fixture f = make_fixture(2, 1, 5, 30, {0, 0}, false, 71);
  CHECK_THROWS_AS(MixedFrequencySmoother(f.params, f.data, 0.0), ValidationError);
  MatrixXd m = f.data.monthly();
  m(2, 0) = kMissing;
  MixedFrequencyDataset early(m, f.data.quarterly(), 2);
  CHECK_THROWS_AS(MixedFrequencySmoother(f.params, early), ValidationError);
  MixedFrequencyDataset noq(f.data.monthly(), MatrixXd(30, 0), 2);
  CHECK_THROWS_AS(MixedFrequencySmoother(VarParameters::zeros(2, 0, 5), noq), ValidationError);
  MixedFrequencySmoother sm(f.params, f.data);
  SmootherConditioning bad = f.cond;
  bad.idio_var(20, 1) = -1.0;
  CHECK_THROWS_AS(sm.smoothed_mean(SmootherVariant::adaptive, bad), NumericalError);
  CHECK(parse_variant("adaptive-univariate") == SmootherVariant::adaptive_univariate);
  CHECK_THROWS_AS(parse_variant("nope"), ValidationError);
}
