#pragma once

#include <array>
#include <span>
#include <vector>

#include "mfvar/linalg.hpp"

namespace mfvar {

// Triangular weights, indexed by lag 0..4 (symmetric, so also oldest..newest).
inline constexpr std::array<double, 5> kTriangularWeights = {1.0 / 9, 2.0 / 9, 3.0 / 9, 2.0 / 9, 1.0 / 9};
inline constexpr int kAggregationSpan = 5;

// VAR(p) at the monthly frequency, monthly variables ordered first.
//   x_t = intercept + sum_l lag(l) x_{t-l} + u_t
struct VarParameters {
  int n_monthly = 0;
  int n_quarterly = 0;
  int lags = 1;
  VectorXd intercept;         // n
  MatrixXd lag_coefficients;  // n x (n*lags) = [Pi_1 ... Pi_p]

  int n_vars() const { return n_monthly + n_quarterly; }
  auto lag(int l) { return lag_coefficients.middleCols((l - 1) * n_vars(), n_vars()); }
  auto lag(int l) const { return lag_coefficients.middleCols((l - 1) * n_vars(), n_vars()); }

  // coefficient row of equation i in regressor order (1, x_{t-1}', ..., x_{t-p}')
  VectorXd equation_row(int i) const;
  void set_equation_row(int i, const VectorXd& row);

  void validate() const;
  static VarParameters zeros(int n_monthly, int n_quarterly, int lags);
  // Same model written with more lags (extra lags carry zero coefficients).
  VarParameters padded(int lags) const;
  double spectral_radius() const;
};

struct CompanionForm {
  MatrixXd transition;      // np x np
  VectorXd intercept;       // np
  MatrixXd innovation_map;  // np x n, chol(Sigma) on top
};

CompanionForm build_companion(const VarParameters& params, const MatrixXd& innovation_cov);

// Compact state (x_{q,t}, ..., x_{q,t-p}) newest first; exogenous regressors
// (y_{m,t-1}', ..., y_{m,t-p}', 1)'.
//   y_t     = Z a_t + C X_t + G e_t
//   a_t     = T a_{t-1} + D X_t + H e_t
struct StateSpaceSystem {
  MatrixXd Z;  // n x n_q(p+1)
  MatrixXd C;  // n x (n_m p + 1)
  MatrixXd G;  // n x n
  MatrixXd T;  // n_q(p+1) x n_q(p+1)
  MatrixXd D;  // n_q(p+1) x (n_m p + 1)
  MatrixXd H;  // n_q(p+1) x n
  int state_dim() const { return static_cast<int>(T.rows()); }
  int n_exog() const { return static_cast<int>(C.cols()); }
};

// sigma_chol: lower Cholesky factor of the period innovation covariance.
// aggregation: n_q x p n_q from build_aggregation_matrix.
StateSpaceSystem build_compact_system(const VarParameters& params, const MatrixXd& sigma_chol,
                                      const MatrixXd& aggregation);

// window ordered oldest -> newest, length 5
double aggregate_quarterly(std::span<const double> window);

MatrixXd build_aggregation_matrix(int n_quarterly, int lags);

// Rows of the identity selecting `observed` (sorted, unique, < dim).
MatrixXd make_selection(const std::vector<int>& observed, int dim);

// Runs the VAR forward. presample: p x n (oldest first). innovations: T x n
// (already scaled). Returns the T x n path following the presample.
MatrixXd simulate_var(const VarParameters& params, const MatrixXd& presample, const MatrixXd& innovations);

}  // namespace mfvar
