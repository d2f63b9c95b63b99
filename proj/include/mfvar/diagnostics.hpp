#pragma once

#include <string>
#include <vector>

#include "mfvar/chain_store.hpp"
#include "mfvar/linalg.hpp"

namespace mfvar {

// 1 + 2 sum_{j=1}^{J} rho_j. J is the first lag with rho_j < 0.01 (included)
// or len/50, whichever comes first. Needs at least 50 draws and nonzero variance.
double inefficiency_factor(const VectorXd& chain);
// rho_1..rho_max_lag (biased estimator, divided by n)
VectorXd autocorrelations(const VectorXd& chain, int max_lag);

// Linear interpolation between order statistics (type 7).
double quantile(std::vector<double> values, double prob);

struct IfGroupSummary {
  std::string group;
  std::size_t count = 0;
  double min = 0, p50 = 0, p75 = 0, p95 = 0, p99 = 0, max = 0;
  double share_above_20 = 0;  // fraction with IF > 20
};

struct IfSummary {
  std::vector<IfGroupSummary> groups;
  std::vector<std::vector<double>> values;  // per group, per parameter
};

// Group names, in table order.
const std::vector<std::string>& if_groups();
IfGroupSummary summarize_group(const std::string& group, const std::vector<double>& ifs);
// Parameters whose chain is constant (e.g. restricted loadings, factor means)
// are skipped.
IfSummary summarize_if(const ChainStore& store, const std::vector<std::string>& groups = if_groups());

struct SignIdentification {
  int coordinate = -1;     // loading index with the largest minimum |draw|
  std::vector<int> flips;  // +1 / -1 per draw
  MatrixXd loadings;       // sign-normalized draws (draws x n)
};

// loading_draws: draws x n for one factor.
SignIdentification identify_sign_maximin(const MatrixXd& loading_draws);
// Applies the normalization to every factor, flipping loadings and factor paths jointly.
void apply_sign_identification(ChainStore& store);

enum class VolAggregation { squared_weights, sd_weights };

struct GdpVolatility {
  VectorXd monthly_var;   // lambda' diag(omega_f) lambda + omega_nu
  VectorXd quarterly_sd;  // at quarter-ends with a full window, NaN elsewhere
};

// loadings: r; factor_var: T x r; idio_var: T. is_quarter_end(t) marks rows.
// squared_weights: var_q = sum w_k^2 var_{t-k}; sd_weights: sd_q = sum w_k sd_{t-k}.
GdpVolatility gdp_volatility(const VectorXd& loadings, const MatrixXd& factor_var, const VectorXd& idio_var,
                             const std::vector<bool>& is_quarter_end,
                             VolAggregation mode = VolAggregation::squared_weights);

}  // namespace mfvar
