#include "mfvar/smoother.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "mfvar/errors.hpp"

namespace mfvar {

std::string variant_name(SmootherVariant v) {
  switch (v) {
    case SmootherVariant::companion: return "companion";
    case SmootherVariant::adaptive: return "adaptive";
    case SmootherVariant::adaptive_univariate: return "adaptive-univariate";
    case SmootherVariant::full_companion: return "full-companion";
  }
  return "?";
}

SmootherVariant parse_variant(const std::string& s) {
  if (s == "companion") return SmootherVariant::companion;
  if (s == "adaptive") return SmootherVariant::adaptive;
  if (s == "adaptive-univariate" || s == "adaptive_univariate") return SmootherVariant::adaptive_univariate;
  if (s == "full-companion" || s == "full_companion") return SmootherVariant::full_companion;
  throw ValidationError("unknown smoother variant '" + s + "'");
}

int StateLayout::dim() const {
  if (companion) return lag_depth * (n_monthly + n_quarterly);
  return n_quarterly * (lag_depth + 1) + static_cast<int>(augmented.size());
}

int StateLayout::locate(int var, int period) const {
  const int lag = t - period;
  if (lag < 0) return -1;
  if (companion) return lag < lag_depth ? lag * (n_monthly + n_quarterly) + var : -1;
  if (var >= n_monthly) return lag <= lag_depth ? lag * n_quarterly + (var - n_monthly) : -1;
  auto key = std::make_pair(var, period);
  auto it = std::lower_bound(augmented.begin(), augmented.end(), key);
  if (it == augmented.end() || *it != key) return -1;
  return n_quarterly * (lag_depth + 1) + static_cast<int>(it - augmented.begin());
}

std::pair<int, int> StateLayout::element(int idx) const {
  if (companion) {
    const int n = n_monthly + n_quarterly;
    return {idx % n, t - idx / n};
  }
  const int base = n_quarterly * (lag_depth + 1);
  if (idx < base) return {n_monthly + idx % n_quarterly, t - idx / n_quarterly};
  return augmented[idx - base];
}

MixedFrequencySmoother::MixedFrequencySmoother(const VarParameters& params, const MixedFrequencyDataset& data,
                                               double kappa)
    : data_(data), kappa_(kappa) {
  params.validate();
  require(params.n_monthly == data.n_monthly() && params.n_quarterly == data.n_quarterly(),
          "VAR and dataset disagree on the number of monthly/quarterly series");
  if (data.n_quarterly() == 0)
    throw ValidationError("the latent-data sampler needs at least one quarterly series");
  require(kappa > 0, "initial state variance must be positive");
  L_ = std::max(params.lags, kAggregationSpan);
  params_ = params.lags < L_ ? params.padded(L_) : params;
  require(data.periods() > L_, "sample must be longer than the lag depth " + std::to_string(L_));
  if (data.balanced_end() < L_ - 1)
    throw ValidationError("every monthly series must be observed in the first " + std::to_string(L_) +
                          " periods (presample)");
  compact_ = build_compact_system(params_, MatrixXd::Identity(data.n_vars(), data.n_vars()),
                                  build_aggregation_matrix(data.n_quarterly(), L_));
}

std::vector<StateLayout> MixedFrequencySmoother::layouts(SmootherVariant v) const {
  const int T = data_.periods();
  const int Tb = data_.balanced_end();
  std::vector<StateLayout> out;
  out.reserve(T - first_step());
  for (int t = first_step(); t < T; ++t) {
    StateLayout l;
    l.t = t;
    l.lag_depth = L_;
    l.n_monthly = data_.n_monthly();
    l.n_quarterly = data_.n_quarterly();
    const bool tail = t > Tb;
    if (v == SmootherVariant::full_companion || (v == SmootherVariant::companion && tail)) {
      l.companion = true;
    } else if (tail) {
      // a series stays in the state from its first gap onwards, with the lags
      // the next period's equations need
      for (int j = 0; j < data_.n_monthly(); ++j) {
        const int fm = data_.first_missing(j);
        if (fm > t) continue;
        for (int s = std::max(fm, t - L_); s <= t; ++s) l.augmented.emplace_back(j, s);
      }
    }
    out.push_back(std::move(l));
  }
  return out;
}

void MixedFrequencySmoother::check_conditioning(const SmootherConditioning& cond) const {
  const int T = data_.periods();
  const int n = data_.n_vars();
  require(cond.shift.rows() == T && cond.shift.cols() == n, "factor shift must be T x n");
  require(cond.idio_var.rows() == T && cond.idio_var.cols() == n, "idiosyncratic variances must be T x n");
  for (int t = L_; t < T; ++t)
    for (int i = 0; i < n; ++i) {
      double w = cond.idio_var(t, i);
      if (!(w > 0) || !std::isfinite(w) || !std::isfinite(cond.shift(t, i)))
        throw NumericalError("latent-data step: invalid volatility or factor term at period " + std::to_string(t));
    }
}

namespace {

struct StepBuilder {
  const VarParameters& par;
  const MixedFrequencyDataset& data;
  const SmootherConditioning& cond;
  const std::vector<ObservationSource>& src;
  double kappa;

  double monthly_value(std::size_t c, int period, int var) const {
    double v = (*src[c].monthly)(period, var);
    if (std::isnan(v))
      throw std::logic_error("latent-data step: monthly value needed at period " + std::to_string(period) +
                             " is neither observed nor in the state");
    return v;
  }

  // State/observation rows for one period with an arbitrary layout.
  StepModel generic(const StateLayout& cur, const StateLayout* prev) const {
    const int t = cur.t;
    const int nm = par.n_monthly;
    const int n = par.n_vars();
    const int L = cur.lag_depth;
    const Index k = static_cast<Index>(src.size());
    const int m = cur.dim();
    StepModel s;
    MatrixXd Tm = prev ? MatrixXd::Zero(m, prev->dim()) : MatrixXd();
    s.state_intercept = MatrixXd::Zero(m, k);
    std::vector<std::pair<int, double>> noise;  // (row, sd)

    // regression of x_{v,t} on its lags: state part into `row`, known part into `known`
    auto regress = [&](int v, const StateLayout& lay, auto&& add_state,
                       Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> known) {
      known.setConstant(par.intercept(v) + cond.shift(t, v));
      for (int l = 1; l <= L; ++l) {
        auto Pl = par.lag(l);
        for (int u = 0; u < n; ++u) {
          const double coef = Pl(v, u);
          if (coef == 0.0) continue;
          const int idx = lay.locate(u, t - l);
          if (idx >= 0) {
            add_state(idx, coef);
          } else {
            if (u >= nm) throw std::logic_error("quarterly lag missing from the state");
            for (Index c = 0; c < k; ++c) known(c) += coef * monthly_value(c, t - l, u);
          }
        }
      }
    };

    for (int e = 0; e < m; ++e) {
      auto [v, per] = cur.element(e);
      if (!prev) {
        if (v >= nm) {
          noise.emplace_back(e, std::sqrt(kappa));
        } else {
          for (Index c = 0; c < k; ++c) s.state_intercept(e, c) = monthly_value(c, per, v);
        }
      } else if (per < t) {
        const int idx = prev->locate(v, per);
        if (idx >= 0) {
          Tm(e, idx) = 1.0;
        } else {
          if (v >= nm) throw std::logic_error("quarterly state element lost between periods");
          for (Index c = 0; c < k; ++c) s.state_intercept(e, c) = monthly_value(c, per, v);
        }
      } else {
        regress(v, *prev, [&](int idx, double coef) { Tm(e, idx) += coef; }, s.state_intercept.row(e));
        noise.emplace_back(e, std::sqrt(cond.idio_var(t, v)));
      }
    }
    s.state_noise = MatrixXd::Zero(m, static_cast<Index>(noise.size()));
    for (std::size_t q = 0; q < noise.size(); ++q) s.state_noise(noise[q].first, static_cast<Index>(q)) = noise[q].second;
    if (prev) s.transition = std::make_shared<const MatrixXd>(std::move(Tm));

    // observation rows
    struct Row {
      Eigen::RowVectorXd z, c, y;
      double var;
    };
    std::vector<Row> rows;
    const ObservationPattern& pat = data.pattern(t);
    if (prev) {
      for (int j : pat.monthly) {
        Row r{Eigen::RowVectorXd::Zero(m), Eigen::RowVectorXd::Zero(k), Eigen::RowVectorXd(k), 0.0};
        for (Index c = 0; c < k; ++c) r.y(c) = (*src[c].monthly)(t, j);
        const int idx = cur.locate(j, t);
        if (idx >= 0) {
          r.z(idx) = 1.0;
        } else {
          regress(j, cur, [&](int i2, double coef) { r.z(i2) += coef; }, r.c);
          r.var = cond.idio_var(t, j);
        }
        rows.push_back(std::move(r));
      }
    }
    // quarterly releases; the first step also carries earlier presample releases
    const int from = prev ? t : 0;
    for (int tq = from; tq <= t; ++tq) {
      for (int j : data.pattern(tq).quarterly) {
        Row r{Eigen::RowVectorXd::Zero(m), Eigen::RowVectorXd::Zero(k), Eigen::RowVectorXd(k), 0.0};
        for (Index c = 0; c < k; ++c) r.y(c) = (*src[c].quarterly)(tq, j);
        for (int lag = 0; lag < kAggregationSpan; ++lag) {
          const int idx = cur.locate(nm + j, tq - lag);
          if (idx < 0) throw std::logic_error("aggregation window not in the state");
          r.z(idx) = kTriangularWeights[lag];
        }
        rows.push_back(std::move(r));
      }
    }
    const Index nt = static_cast<Index>(rows.size());
    auto Z = std::make_shared<MatrixXd>(nt, m);
    s.obs_intercept.resize(nt, k);
    s.obs.resize(nt, k);
    s.obs_var.resize(nt);
    for (Index i = 0; i < nt; ++i) {
      Z->row(i) = rows[i].z;
      s.obs_intercept.row(i) = rows[i].c;
      s.obs.row(i) = rows[i].y;
      s.obs_var(i) = rows[i].var;
    }
    s.design = std::move(Z);
    return s;
  }
};

}  // namespace

std::vector<StepModel> MixedFrequencySmoother::build_steps(SmootherVariant v, const SmootherConditioning& cond,
                                                           const std::vector<ObservationSource>& sources) const {
  check_conditioning(cond);
  require(!sources.empty(), "at least one observation source is required");
  const auto lays = layouts(v);
  const int nm = data_.n_monthly();
  const int nq = data_.n_quarterly();
  const int m = nq * (L_ + 1);
  const int kx = nm * L_ + 1;
  const Index k = static_cast<Index>(sources.size());
  StepBuilder builder{params_, data_, cond, sources, kappa_};

  auto transition = std::make_shared<const MatrixXd>(compact_.T);
  const MatrixXd Dq = compact_.D.topRows(nq);
  const MatrixXd Cm = compact_.C.topRows(nm);
  std::map<std::vector<int>, std::shared_ptr<const MatrixXd>> designs;
  auto design_for = [&](const std::vector<int>& q) {
    auto it = designs.find(q);
    if (it != designs.end()) return it->second;
    auto Z = std::make_shared<MatrixXd>(nm + static_cast<Index>(q.size()), m);
    Z->topRows(nm) = compact_.Z.topRows(nm);
    for (std::size_t r = 0; r < q.size(); ++r) Z->row(nm + static_cast<Index>(r)) = compact_.Z.row(nm + q[r]);
    std::shared_ptr<const MatrixXd> zc = Z;
    designs.emplace(q, zc);
    return zc;
  };

  std::vector<StepModel> steps(lays.size());
  MatrixXd X(kx, k);
  for (std::size_t s = 0; s < lays.size(); ++s) {
    const StateLayout& lay = lays[s];
    const bool plain = !lay.companion && lay.augmented.empty();
    const bool prev_plain = s > 0 && !lays[s - 1].companion && lays[s - 1].augmented.empty();
    if (!(plain && prev_plain)) {
      steps[s] = builder.generic(lay, s > 0 ? &lays[s - 1] : nullptr);
      continue;
    }
    // balanced compact period: system matrices are shared across periods
    const int t = lay.t;
    for (Index c = 0; c < k; ++c) {
      const MatrixXd& ym = *sources[c].monthly;
      for (int l = 1; l <= L_; ++l) X.block((l - 1) * nm, c, nm, 1) = ym.row(t - l).transpose();
      X(kx - 1, c) = 1.0;
    }
    StepModel& st = steps[s];
    st.transition = transition;
    st.state_intercept = MatrixXd::Zero(m, k);
    st.state_intercept.topRows(nq).noalias() = Dq * X;
    st.state_noise = MatrixXd::Zero(m, nq);
    for (int j = 0; j < nq; ++j) {
      st.state_intercept.row(j).array() += cond.shift(t, nm + j);
      st.state_noise(j, j) = std::sqrt(cond.idio_var(t, nm + j));
    }
    const std::vector<int>& q = data_.pattern(t).quarterly;
    st.design = design_for(q);
    const Index nt = nm + static_cast<Index>(q.size());
    st.obs_intercept = MatrixXd::Zero(nt, k);
    st.obs_intercept.topRows(nm).noalias() = Cm * X;
    st.obs_var = VectorXd::Zero(nt);
    st.obs.resize(nt, k);
    for (int i = 0; i < nm; ++i) {
      st.obs_intercept.row(i).array() += cond.shift(t, i);
      st.obs_var(i) = cond.idio_var(t, i);
      for (Index c = 0; c < k; ++c) st.obs(i, c) = (*sources[c].monthly)(t, i);
    }
    for (std::size_t r = 0; r < q.size(); ++r)
      for (Index c = 0; c < k; ++c) st.obs(nm + static_cast<Index>(r), c) = (*sources[c].quarterly)(t, q[r]);
  }
  return steps;
}

MatrixXd MixedFrequencySmoother::extract(const std::vector<StateLayout>& lays, const SmootherOutput& sm, Index column,
                                         const ObservationSource& src) const {
  const int T = data_.periods();
  MatrixXd out = MatrixXd::Constant(T, data_.n_vars(), kMissing);
  for (std::size_t s = 0; s < lays.size(); ++s) {
    const StateLayout& lay = lays[s];
    for (int e = 0; e < lay.dim(); ++e) {
      auto [v, per] = lay.element(e);
      if (per >= 0) out(per, v) = sm.state[s](e, column);
    }
  }
  for (int t = 0; t < T; ++t)
    for (int j : data_.pattern(t).monthly) out(t, j) = (*src.monthly)(t, j);
  if (out.hasNaN()) throw std::logic_error("latent-data step left a latent value unfilled");
  return out;
}

MatrixXd MixedFrequencySmoother::simulate_path(const SmootherConditioning& cond, RngStream& rng) const {
  check_conditioning(cond);
  const int T = data_.periods();
  const int nm = data_.n_monthly();
  const int n = data_.n_vars();
  MatrixXd x(T, n);
  const double sk = std::sqrt(kappa_);
  for (int t = 0; t < L_; ++t) {
    x.row(t).head(nm) = data_.monthly().row(t);
    for (int j = nm; j < n; ++j) x(t, j) = sk * rng.normal();
  }
  VectorXd xt(n);
  for (int t = L_; t < T; ++t) {
    xt = params_.intercept + cond.shift.row(t).transpose();
    for (int l = 1; l <= L_; ++l) xt.noalias() += params_.lag(l) * x.row(t - l).transpose();
    for (int i = 0; i < n; ++i) xt(i) += std::sqrt(cond.idio_var(t, i)) * rng.normal();
    x.row(t) = xt.transpose();
  }
  return x;
}

MatrixXd MixedFrequencySmoother::observe_quarterly(const MatrixXd& path) const {
  const int T = data_.periods();
  const int nm = data_.n_monthly();
  MatrixXd q = MatrixXd::Constant(T, data_.n_quarterly(), kMissing);
  for (int t = 0; t < T; ++t)
    for (int j : data_.pattern(t).quarterly) {
      double v = 0.0;
      for (int lag = 0; lag < kAggregationSpan; ++lag) v += kTriangularWeights[lag] * path(t - lag, nm + j);
      q(t, j) = v;
    }
  return q;
}

SmootherDraw MixedFrequencySmoother::smoothed_mean(SmootherVariant v, const SmootherConditioning& cond) const {
  ObservationSource ys{&data_.monthly(), &data_.quarterly()};
  auto steps = build_steps(v, cond, {ys});
  FilterOptions opt;
  opt.keep_filtered = false;
  const FilterKind kind = v == SmootherVariant::adaptive_univariate ? FilterKind::univariate : FilterKind::multivariate;
  FilterOutput f = run_filter(steps, kind, opt);
  SmootherOutput sm = run_smoother(steps, f);
  return {extract(layouts(v), sm, 0, ys), f.loglik(0)};
}

SmootherDraw MixedFrequencySmoother::draw(SmootherVariant v, const SmootherConditioning& cond, RngStream& rng) const {
  const int nm = data_.n_monthly();
  MatrixXd xp = simulate_path(cond, rng);
  MatrixXd xpm = xp.leftCols(nm);
  MatrixXd xpq = observe_quarterly(xp);
  ObservationSource ys{&data_.monthly(), &data_.quarterly()};
  ObservationSource ps{&xpm, &xpq};
  auto steps = build_steps(v, cond, {ys, ps});
  FilterOptions opt;
  opt.keep_filtered = false;
  const FilterKind kind = v == SmootherVariant::adaptive_univariate ? FilterKind::univariate : FilterKind::multivariate;
  FilterOutput f = run_filter(steps, kind, opt);
  SmootherOutput sm = run_smoother(steps, f);
  const auto lays = layouts(v);
  MatrixXd x = extract(lays, sm, 0, ys);
  x += xp - extract(lays, sm, 1, ps);
  for (int t = 0; t < data_.periods(); ++t)
    for (int j : data_.pattern(t).monthly) x(t, j) = data_.monthly()(t, j);
  return {std::move(x), f.loglik(0)};
}

}  // namespace mfvar
