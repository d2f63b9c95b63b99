#include "mfvar/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>

#include <json.hpp>

#include "mfvar/errors.hpp"
#include "mfvar/rng.hpp"
#include "mfvar/stochvol.hpp"

namespace mfvar {

VarParameters random_stationary_var(int nm, int nq, int p, double max_radius, std::uint64_t seed) {
  require(max_radius > 0 && max_radius < 1, "target spectral radius must be in (0, 1)");
  RngStream rng(seed, {static_cast<std::uint64_t>(Block::synthetic), 1});
  VarParameters v = VarParameters::zeros(nm, nq, p);
  const int n = nm + nq;
  for (int i = 0; i < n; ++i) v.intercept(i) = 0.1 * rng.normal();
  for (int l = 1; l <= p; ++l) {
    auto A = v.lag(l);
    const double decay = 1.0 / (l * l);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        A(i, j) = (i == j ? 0.5 * decay : 0.0) + 0.15 * decay / std::sqrt(static_cast<double>(n)) * rng.normal();
  }
  double rad = v.spectral_radius();
  while (rad > max_radius) {
    // shrinking lag l by c^l scales every companion eigenvalue by c
    const double c = 0.98 * max_radius / rad;
    for (int l = 1; l <= p; ++l) v.lag(l) *= std::pow(c, l);
    rad = v.spectral_radius();
  }
  return v;
}

namespace {

VectorXd sv_path(const SvParams& par, Index len, RngStream& rng) {
  VectorXd h(len);
  h(0) = par.mu + par.sigma / std::sqrt(1 - par.phi * par.phi) * rng.normal();
  for (Index t = 1; t < len; ++t) h(t) = par.mu + par.phi * (h(t - 1) - par.mu) + par.sigma * rng.normal();
  return h;
}

}  // namespace

SyntheticSystem make_synthetic(const SyntheticSpec& s) {
  require(s.n_monthly >= 1 && s.n_quarterly >= 1, "synthetic systems need monthly and quarterly series");
  require(s.lags >= 1 && s.factors >= 0, "invalid synthetic lag or factor count");
  require(s.periods > std::max(s.lags, kAggregationSpan) + 20, "synthetic sample too short");
  const int n = s.n_monthly + s.n_quarterly;
  const int T = s.periods;
  const int burn = 200;
  SyntheticSystem out;
  out.params = random_stationary_var(s.n_monthly, s.n_quarterly, s.lags, s.max_radius, s.seed);

  RngStream rng(s.seed, {static_cast<std::uint64_t>(Block::synthetic), 2});
  const Index len = T + burn;
  MatrixXd loadings = MatrixXd::Zero(n, s.factors);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < std::min(i + 1, s.factors); ++j) loadings(i, j) = 0.5 + 0.5 * rng.uniform();
  for (int i = 0; i < n; ++i)
    if (rng.uniform() < 0.3)
      for (int j = 0; j < s.factors; ++j) loadings(i, j) = -loadings(i, j);
  for (int j = 0; j < s.factors && j < n; ++j) loadings(j, j) = std::abs(loadings(j, j));

  // phi and sigma at the medians of the default priors: (phi+1)/2 ~ Beta(10,3), sigma^2 ~ chi^2(1)
  constexpr double phi = 0.5666, sigma = 0.6745;
  std::vector<SvParams> fpar(static_cast<std::size_t>(s.factors), SvParams{0.0, phi, sigma});
  std::vector<SvParams> ipar(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ipar[static_cast<std::size_t>(i)] = SvParams{std::log(0.3) + 0.2 * rng.normal(), phi, sigma};
  MatrixXd fh(len, s.factors), ih(len, n);
  for (int j = 0; j < s.factors; ++j) fh.col(j) = sv_path(fpar[static_cast<std::size_t>(j)], len, rng);
  for (int i = 0; i < n; ++i) ih.col(i) = sv_path(ipar[static_cast<std::size_t>(i)], len, rng);
  MatrixXd f(len, s.factors), u(len, n);
  for (Index t = 0; t < len; ++t) {
    for (int j = 0; j < s.factors; ++j) f(t, j) = std::exp(0.5 * fh(t, j)) * rng.normal();
    for (int i = 0; i < n; ++i) u(t, i) = std::exp(0.5 * ih(t, i)) * rng.normal();
  }
  u += f * loadings.transpose();
  MatrixXd path = simulate_var(out.params, MatrixXd::Zero(s.lags, n), u);
  out.x = path.bottomRows(T);

  const Index te = T - s.lags;
  out.fsv.loadings = loadings;
  out.fsv.factors = f.bottomRows(te);
  out.fsv.factor_logvol = fh.bottomRows(te);
  out.fsv.idio_logvol = ih.bottomRows(te);
  out.fsv.factor_params = fpar;
  out.fsv.idio_params = ipar;

  // observation: quarter-ends at t % 3 == 2; staggered releases at the edge
  const int phase = 2;
  MatrixXd ym = out.x.leftCols(s.n_monthly);
  MatrixXd yq = MatrixXd::Constant(T, s.n_quarterly, kMissing);
  for (int t = kAggregationSpan - 1; t < T; ++t) {
    if (t % 3 != phase) continue;
    for (int j = 0; j < s.n_quarterly; ++j) {
      double acc = 0;
      for (int k = 0; k < kAggregationSpan; ++k)
        acc += kTriangularWeights[static_cast<std::size_t>(k)] * out.x(t - k, s.n_monthly + j);
      yq(t, j) = acc;
    }
  }
  if (s.ragged) {
    // series j: month M released in month M + 1 (every third series M + 2) on day
    // 1 + 7j mod 28; snapshot in month T, so 0, 1 or 2 trailing values are missing
    for (int j = 0; j < s.n_monthly; ++j) {
      const int m = j % 3 == 2 ? 2 : 1;
      const int day = 1 + (7 * j) % 28;
      for (int t = 0; t < T; ++t) {
        const int release = t + m;
        if (release > T || (release == T && s.day_of_month < day)) ym(t, j) = kMissing;
      }
    }
    // quarterly value for month M appears at the start of month M + 3
    for (int t = 0; t < T; ++t)
      if (t + 3 > T) yq.row(t).setConstant(kMissing);
  }
  out.data = MixedFrequencyDataset(ym, yq, phase);
  return out;
}

void BenchSpec::validate() const {
  require(!n_vars.empty() && !lags.empty() && !variants.empty(), "benchmark sweeps must be nonempty");
  require(repetitions >= 3, "benchmark needs at least 3 repetitions");
  require(n_quarterly >= 1, "benchmark needs at least one quarterly series");
  for (int n : n_vars) require(n > n_quarterly, "each system needs at least one monthly series");
  for (int p : lags) require(p >= 1, "lag lengths must be positive");
  require(day_of_month >= 1 && day_of_month <= 31, "snapshot day must be in 1..31");
  require(workers >= 1, "worker count must be at least 1");
}

BenchSpec BenchSpec::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("benchmark spec is not valid JSON: ") + e.what());
  }
  BenchSpec b;
  try {
    b.n_vars = j.at("n_vars").get<std::vector<int>>();
    b.lags = j.at("lags").get<std::vector<int>>();
    if (j.contains("variants")) {
      b.variants.clear();
      for (const auto& v : j["variants"]) b.variants.push_back(parse_variant(v.get<std::string>()));
    }
    b.day_of_month = j.value("day_of_month", b.day_of_month);
    b.repetitions = j.value("repetitions", b.repetitions);
    b.n_quarterly = j.value("n_quarterly", b.n_quarterly);
    b.periods = j.value("periods", b.periods);
    b.seed = j.value("seed", b.seed);
    b.workers = j.value("workers", b.workers);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("benchmark spec: ") + e.what());
  }
  b.validate();
  return b;
}

const BenchRow& BenchTable::find(SmootherVariant v, int n, int p) const {
  for (const auto& r : rows)
    if (r.variant == v && r.n_vars == n && r.lags == p) return r;
  throw ValidationError("no benchmark row for " + variant_name(v) + " n=" + std::to_string(n) +
                        " p=" + std::to_string(p));
}

BenchTable bench_smoothers(const BenchSpec& spec) {
  spec.validate();
  using Clock = std::chrono::steady_clock;
  BenchTable table;
  table.workers = spec.workers;
  table.repetitions = spec.repetitions;
  for (int n : spec.n_vars) {
    for (int p : spec.lags) {
      SyntheticSpec ss;
      ss.n_monthly = n - spec.n_quarterly;
      ss.n_quarterly = spec.n_quarterly;
      ss.lags = p;
      ss.periods = spec.periods;
      ss.factors = 1;
      ss.seed = spec.seed + static_cast<std::uint64_t>(1000 * n + p);
      ss.day_of_month = spec.day_of_month;
      SyntheticSystem sys = make_synthetic(ss);
      const int T = sys.data.periods();
      SmootherConditioning cond;
      cond.shift = MatrixXd::Zero(T, n);
      cond.idio_var = MatrixXd::Ones(T, n);
      cond.shift.bottomRows(sys.fsv.periods()) = sys.fsv.common_component();
      cond.idio_var.bottomRows(sys.fsv.periods()) = sys.fsv.idio_logvol.array().exp().matrix();
      MixedFrequencySmoother sm(sys.params, sys.data);

      MatrixXd reference;
      for (SmootherVariant v : spec.variants) {
        BenchRow row{v, n, p, spec.n_quarterly, 0, 0, 0};
        RngStream gate = make_stream(spec.seed, 0, 0, Block::bench, 0);
        MatrixXd x = sm.draw(v, cond, gate).x;
        if (reference.size() == 0) reference = x;
        row.max_abs_diff = (x - reference).cwiseAbs().maxCoeff();
        if (!(row.max_abs_diff <= 1e-6))
          throw NumericalError("benchmark correctness failure: " + variant_name(v) + " draw differs from " +
                               variant_name(spec.variants.front()) + " by " + std::to_string(row.max_abs_diff) +
                               " at n=" + std::to_string(n) + ", p=" + std::to_string(p));
        std::vector<double> secs;
        for (int r = 0; r < spec.repetitions; ++r) {
          RngStream rng = make_stream(spec.seed, 0, static_cast<std::uint64_t>(r + 1), Block::bench, 0);
          auto t0 = Clock::now();
          SmootherDraw d = sm.draw(v, cond, rng);
          secs.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
          if (!d.x.allFinite()) throw NumericalError("benchmark draw is not finite");
        }
        std::sort(secs.begin(), secs.end());
        const std::size_t m = secs.size();
        row.median_seconds = m % 2 ? secs[m / 2] : 0.5 * (secs[m / 2 - 1] + secs[m / 2]);
        row.min_seconds = secs.front();
        table.rows.push_back(row);
      }
    }
  }
  return table;
}

void write_bench_csv(const BenchTable& t, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot write '" + path + "'");
  os << "# workers=" << t.workers << " repetitions=" << t.repetitions << '\n';
  os << "variant,n,p,n_quarterly,median_seconds,min_seconds,max_abs_diff\n" << std::setprecision(9);
  for (const auto& r : t.rows)
    os << variant_name(r.variant) << ',' << r.n_vars << ',' << r.lags << ',' << r.n_quarterly << ','
       << r.median_seconds << ',' << r.min_seconds << ',' << r.max_abs_diff << '\n';
}

}  // namespace mfvar
