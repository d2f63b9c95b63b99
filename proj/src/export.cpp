#include "mfvar/export.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "mfvar/binary_io.hpp"
#include "mfvar/errors.hpp"

namespace mfvar {

const std::vector<std::string>& export_selectors() {
  static const std::vector<std::string> s = {"pi_mean",  "pi_draws",   "loadings",  "factor_vol", "idio_vol",
                                             "gdp_vol",  "latent_gdp", "sv_params", "if_summary"};
  return s;
}

namespace {

// percentiles over draws of each element of f(draw), an m-vector
template <class F>
MatrixXd percentile_columns(const std::vector<DrawRecord>& draws, Index m, F f) {
  const Index D = static_cast<Index>(draws.size());
  MatrixXd all(m, D);
  for (Index d = 0; d < D; ++d) all.col(d) = f(draws[static_cast<std::size_t>(d)]);
  MatrixXd out(m, 3);
  for (Index i = 0; i < m; ++i) {
    std::vector<double> v(static_cast<std::size_t>(D));
    for (Index d = 0; d < D; ++d) v[static_cast<std::size_t>(d)] = all(i, d);
    out(i, 0) = quantile(v, 0.10);
    out(i, 1) = quantile(v, 0.50);
    out(i, 2) = quantile(v, 0.90);
  }
  return out;
}

// m x 3 blocks side by side: k blocks of T rows each, laid out as T x 3k
MatrixXd widen(const MatrixXd& stacked, Index rows, Index k) {
  MatrixXd out(rows, 3 * k);
  for (Index j = 0; j < k; ++j) out.middleCols(3 * j, 3) = stacked.middleRows(j * rows, rows);
  return out;
}

std::vector<std::string> pct_names(const std::string& base) {
  return {base + "_p10", base + "_p50", base + "_p90"};
}

std::string var_name(const ChainMetadata& m, Index i) {
  return i < static_cast<Index>(m.names.size()) && !m.names[static_cast<std::size_t>(i)].empty()
             ? m.names[static_cast<std::size_t>(i)]
             : "x" + std::to_string(i + 1);
}

}  // namespace

Table export_table(const ChainStore& input, const std::string& what, VolAggregation mode) {
  if (std::find(export_selectors().begin(), export_selectors().end(), what) == export_selectors().end())
    throw ValidationError("unknown export selector '" + what + "'");
  require(!input.draws.empty(), "chain store has no draws");
  ChainStore store = input;
  if (store.meta.factors > 0) apply_sign_identification(store);
  const auto& dr = store.draws;
  const auto& m = store.meta;
  const Index D = static_cast<Index>(dr.size());
  const Index n = dr.front().pi.rows();
  const Index k = dr.front().pi.cols();
  const Index r = dr.front().loadings.cols();
  const Index te = dr.front().idio_logvol.rows();
  Table t;

  if (what == "pi_mean") {
    t.values = MatrixXd::Zero(n, k);
    for (const auto& d : dr) t.values += d.pi;
    t.values /= static_cast<double>(D);
    t.columns.push_back("const");
    for (int l = 1; l <= (k - 1) / std::max<Index>(n, 1); ++l)
      for (Index j = 0; j < n; ++j) t.columns.push_back(var_name(m, j) + "_l" + std::to_string(l));
  } else if (what == "pi_draws") {
    t.values.resize(D, n * k);
    for (Index d = 0; d < D; ++d)
      for (Index i = 0; i < n; ++i) t.values.block(d, i * k, 1, k) = dr[static_cast<std::size_t>(d)].pi.row(i);
    for (Index i = 0; i < n; ++i)
      for (Index c = 0; c < k; ++c) t.columns.push_back("pi_" + std::to_string(i + 1) + "_" + std::to_string(c));
  } else if (what == "loadings") {
    t.values.resize(D, n * r);
    for (Index d = 0; d < D; ++d)
      for (Index j = 0; j < r; ++j) t.values.block(d, j * n, 1, n) = dr[static_cast<std::size_t>(d)].loadings.col(j).transpose();
    for (Index j = 0; j < r; ++j)
      for (Index i = 0; i < n; ++i) t.columns.push_back(var_name(m, i) + "_f" + std::to_string(j + 1));
  } else if (what == "factor_vol" || what == "idio_vol") {
    const bool fac = what == "factor_vol";
    const Index c = fac ? r : n;
    MatrixXd st = percentile_columns(dr, te * c, [&](const DrawRecord& d) {
      const MatrixXd& h = fac ? d.factor_logvol : d.idio_logvol;
      return VectorXd((0.5 * h.array()).exp().matrix().reshaped());
    });
    t.values = widen(st, te, c);
    for (Index j = 0; j < c; ++j)
      for (auto& s : pct_names(fac ? "f" + std::to_string(j + 1) : var_name(m, j))) t.columns.push_back(s);
  } else if (what == "gdp_vol") {
    require(m.n_quarterly >= 1, "no quarterly series in the chain");
    const Index g = m.n_monthly;
    const int lags = m.lags;
    std::vector<bool> qe(static_cast<std::size_t>(te));
    for (Index s = 0; s < te; ++s) qe[static_cast<std::size_t>(s)] = (s + lags) % 3 == m.quarter_phase;
    t.values = percentile_columns(dr, te, [&](const DrawRecord& d) {
      VectorXd lam = d.loadings.row(g).transpose();
      MatrixXd fv = d.factor_logvol.array().exp();
      VectorXd iv = d.idio_logvol.col(g).array().exp();
      return gdp_volatility(lam, fv, iv, qe, mode).quarterly_sd;
    });
    t.columns = pct_names(var_name(m, g) + "_sd");
  } else if (what == "latent_gdp") {
    const Index T = dr.front().x_quarterly.rows();
    const Index q = dr.front().x_quarterly.cols();
    MatrixXd st = percentile_columns(dr, T * q, [](const DrawRecord& d) { return VectorXd(d.x_quarterly.reshaped()); });
    t.values = widen(st, T, q);
    for (Index j = 0; j < q; ++j)
      for (auto& s : pct_names(var_name(m, m.n_monthly + j))) t.columns.push_back(s);
  } else if (what == "sv_params") {
    t.values.resize(D, 3 * (n + r));
    for (Index d = 0; d < D; ++d) {
      const auto& rec = dr[static_cast<std::size_t>(d)];
      for (Index i = 0; i < n; ++i) t.values.block(d, 3 * i, 1, 3) = rec.idio_params.row(i);
      for (Index j = 0; j < r; ++j) t.values.block(d, 3 * (n + j), 1, 3) = rec.factor_params.row(j);
    }
    for (Index i = 0; i < n + r; ++i) {
      const std::string b = i < n ? var_name(m, i) : "f" + std::to_string(i - n + 1);
      for (const char* p : {"_mu", "_phi", "_sigma"}) t.columns.push_back(b + p);
    }
  } else {
    IfSummary s = summarize_if(input);
    t.values.resize(static_cast<Index>(s.groups.size()), 8);
    for (std::size_t g = 0; g < s.groups.size(); ++g) {
      const auto& x = s.groups[g];
      t.values.row(static_cast<Index>(g)) << static_cast<double>(x.count), x.min, x.p50, x.p75, x.p95, x.p99, x.max,
          x.share_above_20;
    }
    t.columns = {"count", "min", "p50", "p75", "p95", "p99", "max", "share_above_20"};
  }
  return t;
}

void write_table(const Table& t, const std::string& format, const std::string& path) {
  if (format == "bin") {
    save_matrix_binary(path, t.values);
    return;
  }
  if (format != "csv") throw ValidationError("unknown export format '" + format + "' (csv or bin)");
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot write '" + path + "'");
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << '\n' << std::setprecision(17);
  for (Index i = 0; i < t.values.rows(); ++i) {
    for (Index j = 0; j < t.values.cols(); ++j) {
      if (j) os << ',';
      if (!std::isnan(t.values(i, j))) os << t.values(i, j);
    }
    os << '\n';
  }
}

}  // namespace mfvar
