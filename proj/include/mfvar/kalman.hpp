#pragma once

#include <memory>
#include <vector>

#include "mfvar/linalg.hpp"

namespace mfvar {

// One period of a linear Gaussian state-space model with k data columns that
// share the covariance recursion:
//   alpha_t = T_t alpha_{t-1} + d_t + H_t eps_t
//   y_t     = Z_t alpha_t + c_t + diag(obs_var)^{1/2} e_t
// At the first step alpha ~ N(d, H H') and the transition is ignored.
struct StepModel {
  std::shared_ptr<const MatrixXd> transition;  // m_t x m_{t-1}
  MatrixXd state_intercept;                    // m_t x k
  MatrixXd state_noise;                        // m_t x q_t
  std::shared_ptr<const MatrixXd> design;      // n_t x m_t
  MatrixXd obs_intercept;                      // n_t x k
  VectorXd obs_var;                            // n_t, zero for exact rows
  MatrixXd obs;                                // n_t x k

  Index state_dim() const { return state_intercept.rows(); }
  Index obs_dim() const { return obs.rows(); }
  Index columns() const { return state_intercept.cols(); }
};

void validate_steps(const std::vector<StepModel>& steps);

enum class FilterKind { multivariate, univariate };

struct FilterOptions {
  bool keep_filtered = true;  // a_{t|t}, P_{t|t}
  bool keep_elements = false; // a_{t,i}, P_{t,i} (univariate only)
};

struct FilterOutput {
  FilterKind kind = FilterKind::univariate;
  std::vector<MatrixXd> predicted_mean;  // a_t
  std::vector<MatrixXd> predicted_cov;   // P_t
  std::vector<MatrixXd> filtered_mean;
  std::vector<MatrixXd> filtered_cov;
  std::vector<MatrixXd> innovation;      // v, n_t x k
  // univariate: columns K_{t,i} = P_{t,i} Z_{t,i}'; multivariate: P Z' F^{-1}
  std::vector<MatrixXd> gain;
  // univariate: F_{t,i}, zero marks an element skipped as redundant
  std::vector<VectorXd> innovation_var;
  // multivariate: F_t^{-1} v_t
  std::vector<MatrixXd> scaled_innovation;
  std::vector<std::vector<MatrixXd>> element_mean;
  std::vector<std::vector<MatrixXd>> element_cov;
  VectorXd loglik;  // per data column
};

struct SmootherOutput {
  std::vector<MatrixXd> state;  // smoothed alpha_t, m_t x k
  std::vector<MatrixXd> r0;     // r_{t,0}
};

FilterOutput kalman_filter_reference(const std::vector<StepModel>& steps, const FilterOptions& opt = {});
FilterOutput univariate_filter(const std::vector<StepModel>& steps, const FilterOptions& opt = {});
SmootherOutput multivariate_smoother(const std::vector<StepModel>& steps, const FilterOutput& f);
SmootherOutput univariate_smoother(const std::vector<StepModel>& steps, const FilterOutput& f);

FilterOutput run_filter(const std::vector<StepModel>& steps, FilterKind kind, const FilterOptions& opt = {});
SmootherOutput run_smoother(const std::vector<StepModel>& steps, const FilterOutput& f);

}  // namespace mfvar
