#include "mfvar/priors.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "mfvar/errors.hpp"

namespace mfvar {

void MinnesotaConfig::validate(int n) const {
  require(lambda1 > 0 && lambda2 > 0, "Minnesota tightness parameters must be positive");
  require(lambda3 >= 0, "Minnesota lag decay must be nonnegative");
  require(scale.size() == n, "Minnesota scale vector must have one entry per variable");
  require((scale.array() > 0).all() && scale.allFinite(), "Minnesota scales must be positive");
  require(intercept_sd_multiplier > 0, "intercept prior sd multiplier must be positive");
}

double minnesota_sd(int i, int j, int l, const MinnesotaConfig& cfg) {
  if (l < 1) throw ValidationError("Minnesota prior: lag must be >= 1, got " + std::to_string(l));
  double decay = std::pow(static_cast<double>(l), cfg.lambda3);
  if (i == j) return cfg.lambda1 / decay;
  return cfg.lambda1 * cfg.lambda2 / decay * cfg.scale(i) / cfg.scale(j);
}

VectorXd build_prior_diagonal(int i, int lags, const MinnesotaConfig& cfg) {
  const int n = static_cast<int>(cfg.scale.size());
  cfg.validate(n);
  VectorXd d(1 + n * lags);
  double c = cfg.intercept_sd_multiplier * cfg.scale(i);
  d(0) = c * c;
  for (int l = 1; l <= lags; ++l)
    for (int j = 0; j < n; ++j) {
      double s = minnesota_sd(i, j, l, cfg);
      d(1 + (l - 1) * n + j) = s * s;
    }
  if (d.tail(n * lags).maxCoeff() < 1e-12) warn("Minnesota prior variances are essentially zero (dogmatic prior)");
  return d;
}

MinnesotaConfig default_minnesota(int n_vars, VectorXd scale) {
  MinnesotaConfig cfg;
  if (n_vars > 100) cfg.lambda1 = 0.1;
  cfg.scale = std::move(scale);
  return cfg;
}

namespace {

double ar_sd(const std::vector<double>& y, int order) {
  const int n = static_cast<int>(y.size());
  require(n >= 2, "series too short to estimate a scale");
  if (n < order + 1 + 5) {
    double mean = 0;
    for (double v : y) mean += v;
    mean /= n;
    double ss = 0;
    for (double v : y) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / (n - 1));
  }
  const int rows = n - order;
  MatrixXd X(rows, order + 1);
  VectorXd z(rows);
  for (int r = 0; r < rows; ++r) {
    X(r, 0) = 1.0;
    for (int l = 1; l <= order; ++l) X(r, l) = y[order + r - l];
    z(r) = y[order + r];
  }
  VectorXd b = X.colPivHouseholderQr().solve(z);
  VectorXd e = z - X * b;
  return std::sqrt(e.squaredNorm() / std::max(1, rows - order - 1));
}

}  // namespace

VectorXd ar_residual_scale(const MixedFrequencyDataset& data, int order) {
  VectorXd s(data.n_vars());
  const int Tb = data.balanced_end();
  for (int j = 0; j < data.n_monthly(); ++j) {
    std::vector<double> y;
    for (int t = 0; t <= Tb; ++t) y.push_back(data.monthly()(t, j));
    s(j) = ar_sd(y, order);
  }
  for (int j = 0; j < data.n_quarterly(); ++j) {
    std::vector<double> y;
    for (int t = 0; t < data.periods(); ++t)
      if (!std::isnan(data.quarterly()(t, j))) y.push_back(data.quarterly()(t, j));
    s(data.n_monthly() + j) = ar_sd(y, order);
  }
  for (int i = 0; i < s.size(); ++i)
    if (!(s(i) > 0)) throw ValidationError("series '" + data.names()[i] + "' has zero residual scale");
  return s;
}

}  // namespace mfvar
