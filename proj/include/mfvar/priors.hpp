#pragma once

#include "mfvar/dataset.hpp"
#include "mfvar/linalg.hpp"

namespace mfvar {

struct MinnesotaConfig {
  double lambda1 = 0.2;  // overall tightness
  double lambda2 = 0.5;  // cross-variable tightness
  double lambda3 = 2.0;  // lag decay
  VectorXd scale;        // s_i, residual sd of univariate AR fits
  double intercept_sd_multiplier = 10.0;

  void validate(int n) const;
};

struct FsvPriorConfig {
  double mu_mean = 0.0;
  double mu_var = 10.0;
  double phi_a = 10.0;  // (phi + 1)/2 ~ Beta(a, b)
  double phi_b = 3.0;
  double sigma2_scale = 1.0;  // sigma^2 ~ scale * chi^2(1), i.e. sigma ~ N(0, scale) folded
  double loading_var = 1.0;
};

// Prior sd of the lag-l coefficient of variable j in equation i (0-based i, j).
double minnesota_sd(int i, int j, int l, const MinnesotaConfig& cfg);

// Prior variances of equation i in regressor order (1, x_{t-1}', ..., x_{t-p}').
VectorXd build_prior_diagonal(int i, int lags, const MinnesotaConfig& cfg);

// Defaults with lambda1 = 0.1 above 100 variables.
MinnesotaConfig default_minnesota(int n_vars, VectorXd scale);

// Residual sd of an AR(order) fit with intercept for every series. Monthly
// series use the balanced segment, quarterly series their observed values.
VectorXd ar_residual_scale(const MixedFrequencyDataset& data, int order = 4);

}  // namespace mfvar
