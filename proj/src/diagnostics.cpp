#include "mfvar/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "mfvar/errors.hpp"
#include "mfvar/model.hpp"

namespace mfvar {

VectorXd autocorrelations(const VectorXd& chain, int max_lag) {
  const Index n = chain.size();
  VectorXd d = chain.array() - chain.mean();
  const double c0 = d.squaredNorm() / static_cast<double>(n);
  if (!(c0 > 0)) throw NumericalError("chain has zero variance");
  VectorXd rho(max_lag);
  for (int j = 1; j <= max_lag; ++j)
    rho(j - 1) = d.head(n - j).dot(d.tail(n - j)) / static_cast<double>(n) / c0;
  return rho;
}

double inefficiency_factor(const VectorXd& chain) {
  if (chain.size() < 50) throw ValidationError("inefficiency factor needs at least 50 draws");
  if (!chain.allFinite()) throw NumericalError("chain has non-finite values");
  const int cap = static_cast<int>(chain.size() / 50);
  VectorXd rho = autocorrelations(chain, cap);
  double sum = 0.0;
  for (int j = 0; j < cap; ++j) {
    sum += rho(j);
    if (rho(j) < 0.01) break;
  }
  return 1.0 + 2.0 * sum;
}

double quantile(std::vector<double> v, double prob) {
  require(!v.empty(), "quantile of an empty set");
  require(prob >= 0 && prob <= 1, "quantile probability outside [0, 1]");
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

const std::vector<std::string>& if_groups() {
  static const std::vector<std::string> g = {"latent_gdp", "regression", "factor",   "loadings",
                                             "logvol",     "sv_mean",    "sv_ar",    "sv_var"};
  return g;
}

IfGroupSummary summarize_group(const std::string& group, const std::vector<double>& ifs) {
  IfGroupSummary s;
  s.group = group;
  s.count = ifs.size();
  if (ifs.empty()) {
    s.min = s.p50 = s.p75 = s.p95 = s.p99 = s.max = std::nan("");
    return s;
  }
  s.min = *std::min_element(ifs.begin(), ifs.end());
  s.max = *std::max_element(ifs.begin(), ifs.end());
  s.p50 = quantile(ifs, 0.50);
  s.p75 = quantile(ifs, 0.75);
  s.p95 = quantile(ifs, 0.95);
  s.p99 = quantile(ifs, 0.99);
  s.share_above_20 =
      static_cast<double>(std::count_if(ifs.begin(), ifs.end(), [](double v) { return v > 20.0; })) /
      static_cast<double>(ifs.size());
  return s;
}

namespace {

// IF of every element of a per-draw matrix field
template <class Get>
void collect(const std::vector<DrawRecord>& draws, Get get, std::vector<double>& out) {
  const MatrixXd& first = get(draws.front());
  const Index D = static_cast<Index>(draws.size());
  const Index m = first.size();
  std::vector<double> vals(static_cast<std::size_t>(m), 0.0);
  std::vector<char> keep(static_cast<std::size_t>(m), 0);
#pragma omp parallel for schedule(static)
  for (Index e = 0; e < m; ++e) {
    VectorXd c(D);
    for (Index d = 0; d < D; ++d) c(d) = get(draws[static_cast<std::size_t>(d)]).data()[e];
    if ((c.array() == c(0)).all()) continue;
    vals[static_cast<std::size_t>(e)] = std::max(0.0, inefficiency_factor(c));
    keep[static_cast<std::size_t>(e)] = 1;
  }
  for (std::size_t e = 0; e < vals.size(); ++e)
    if (keep[e]) out.push_back(vals[e]);
}

}  // namespace

IfSummary summarize_if(const ChainStore& input, const std::vector<std::string>& groups) {
  require(!input.draws.empty(), "chain store has no draws");
  for (const auto& g : groups)
    if (std::find(if_groups().begin(), if_groups().end(), g) == if_groups().end())
      throw ValidationError("unknown parameter group '" + g + "'");
  ChainStore store = input;
  if (store.meta.factors > 0) apply_sign_identification(store);
  const auto& dr = store.draws;
  IfSummary out;
  for (const auto& g : groups) {
    std::vector<double> v;
    if (g == "latent_gdp") {
      collect(dr, [](const DrawRecord& d) -> const MatrixXd& { return d.x_quarterly; }, v);
    } else if (g == "regression") {
      collect(dr, [](const DrawRecord& d) -> const MatrixXd& { return d.pi; }, v);
    } else if (g == "factor") {
      collect(dr, [](const DrawRecord& d) -> const MatrixXd& { return d.factors; }, v);
    } else if (g == "loadings") {
      collect(dr, [](const DrawRecord& d) -> const MatrixXd& { return d.loadings; }, v);
    } else if (g == "logvol") {
      collect(dr, [](const DrawRecord& d) -> const MatrixXd& { return d.idio_logvol; }, v);
      collect(dr, [](const DrawRecord& d) -> const MatrixXd& { return d.factor_logvol; }, v);
    } else {
      const int col = g == "sv_mean" ? 0 : g == "sv_ar" ? 1 : 2;
      std::vector<MatrixXd> par(dr.size());
      for (std::size_t k = 0; k < dr.size(); ++k) {
        MatrixXd p(dr[k].idio_params.rows() + dr[k].factor_params.rows(), 1);
        p << dr[k].idio_params.col(col), dr[k].factor_params.col(col);
        if (col == 2) p = p.array().square();
        par[k] = p;
      }
      std::vector<DrawRecord> tmp(dr.size());
      for (std::size_t k = 0; k < dr.size(); ++k) tmp[k].pi = std::move(par[k]);
      collect(tmp, [](const DrawRecord& d) -> const MatrixXd& { return d.pi; }, v);
    }
    out.groups.push_back(summarize_group(g, v));
    out.values.push_back(std::move(v));
  }
  return out;
}

SignIdentification identify_sign_maximin(const MatrixXd& draws) {
  require(draws.rows() >= 1 && draws.cols() >= 1, "sign identification needs at least one draw");
  SignIdentification s;
  VectorXd minabs = draws.cwiseAbs().colwise().minCoeff().transpose();
  Index best = 0;
  minabs.maxCoeff(&best);
  s.coordinate = static_cast<int>(best);
  s.loadings = draws;
  s.flips.assign(static_cast<std::size_t>(draws.rows()), 1);
  int zero = 0;
  for (Index d = 0; d < draws.rows(); ++d) {
    const double v = draws(d, best);
    if (v == 0.0) {
      if (draws.row(d).isZero(0.0)) ++zero;
      continue;
    }
    if (v < 0) {
      s.flips[static_cast<std::size_t>(d)] = -1;
      s.loadings.row(d) *= -1.0;
    }
  }
  if (zero > 0) warn(std::to_string(zero) + " draws with an all-zero loading vector left unflipped");
  return s;
}

void apply_sign_identification(ChainStore& store) {
  if (store.draws.empty()) return;
  const Index n = store.draws.front().loadings.rows();
  const Index r = store.draws.front().loadings.cols();
  const Index D = static_cast<Index>(store.draws.size());
  for (Index j = 0; j < r; ++j) {
    MatrixXd L(D, n);
    for (Index d = 0; d < D; ++d) L.row(d) = store.draws[static_cast<std::size_t>(d)].loadings.col(j).transpose();
    SignIdentification s = identify_sign_maximin(L);
    for (Index d = 0; d < D; ++d) {
      if (s.flips[static_cast<std::size_t>(d)] > 0) continue;
      DrawRecord& rec = store.draws[static_cast<std::size_t>(d)];
      rec.loadings.col(j) *= -1.0;
      rec.factors.col(j) *= -1.0;
    }
  }
}

GdpVolatility gdp_volatility(const VectorXd& loadings, const MatrixXd& factor_var, const VectorXd& idio_var,
                             const std::vector<bool>& is_quarter_end, VolAggregation mode) {
  const Index T = idio_var.size();
  require(factor_var.rows() == T && factor_var.cols() == loadings.size(), "volatility paths are not aligned");
  require(static_cast<Index>(is_quarter_end.size()) == T, "quarter-end mask is not aligned");
  require((factor_var.array() >= 0).all() && (idio_var.array() >= 0).all(), "variances must be nonnegative");
  GdpVolatility g;
  g.monthly_var = factor_var * loadings.array().square().matrix() + idio_var;
  g.quarterly_sd = VectorXd::Constant(T, std::nan(""));
  for (Index t = kAggregationSpan - 1; t < T; ++t) {
    if (!is_quarter_end[static_cast<std::size_t>(t)]) continue;
    double acc = 0.0;
    for (int k = 0; k < kAggregationSpan; ++k) {
      const double w = kTriangularWeights[static_cast<std::size_t>(k)];
      acc += mode == VolAggregation::squared_weights ? w * w * g.monthly_var(t - k)
                                                     : w * std::sqrt(g.monthly_var(t - k));
    }
    g.quarterly_sd(t) = mode == VolAggregation::squared_weights ? std::sqrt(acc) : acc;
  }
  return g;
}

}  // namespace mfvar
