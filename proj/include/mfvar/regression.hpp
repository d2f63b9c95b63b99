#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfvar/linalg.hpp"
#include "mfvar/rng.hpp"

namespace mfvar {

// Standardised regression of one VAR equation: response and rows of the
// design divided by sqrt(omega^nu_{i,t}).
struct EquationSystem {
  MatrixXd design;    // T_eff x (np+1)
  VectorXd response;  // T_eff
  VectorXd prior_var; // diagonal of D_i
};

enum class SamplerPolicy { automatic, rue, bhattacharya };
std::string policy_name(SamplerPolicy p);
SamplerPolicy parse_policy(const std::string& s);

// Bhattacharya when np+1 > T_eff under the automatic policy.
SamplerPolicy choose_sampler(Index n_coef, Index t_eff, SamplerPolicy policy);

// Rows t = p..T-1: (1, x_{t-1}', ..., x_{t-p}').
MatrixXd build_regressors(const MatrixXd& x, int lags);

// factor_part and idio_var are T_eff x n (rows aligned with regressors).
EquationSystem build_equation_system(int i, const MatrixXd& regressors, const MatrixXd& x, int lags,
                                     const MatrixXd& factor_part, const MatrixXd& idio_var, const VectorXd& prior_var);
EquationSystem build_equation_system(int i, const MatrixXd& x, int lags, const MatrixXd& factor_part,
                                     const MatrixXd& idio_var, const VectorXd& prior_var);

// Dense posterior moments, for reference.
VectorXd posterior_mean_dense(const EquationSystem& sys);
MatrixXd posterior_cov_dense(const EquationSystem& sys);

// z ~ N(0, I_k); z = 0 returns the posterior mean.
VectorXd draw_row_rue(const EquationSystem& sys, const VectorXd& z);
VectorXd draw_row_rue(const EquationSystem& sys, RngStream& rng);
// u_std ~ N(0, I_k) (scaled by D^{1/2} inside), delta ~ N(0, I_T).
VectorXd draw_row_bhattacharya(const EquationSystem& sys, const VectorXd& u_std, const VectorXd& delta);
VectorXd draw_row_bhattacharya(const EquationSystem& sys, RngStream& rng);

struct RegressionInputs {
  const MatrixXd* x = nullptr;            // T x n latent path
  int lags = 1;
  const MatrixXd* factor_part = nullptr;  // T_eff x n
  const MatrixXd* idio_var = nullptr;     // T_eff x n
  const std::vector<VectorXd>* prior_var = nullptr;  // per equation
};

struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t chain = 0;
  std::uint64_t iteration = 0;
};

// Equation-wise draw of Pi in regressor order: row i = (c_i, Pi_1(i,:), ..., Pi_p(i,:)).
// Equation i uses the stream (seed, chain, iteration, regression, i), so the
// result does not depend on the number of workers.
MatrixXd draw_pi(const RegressionInputs& in, SamplerPolicy policy, int workers, const StreamKey& key);
MatrixXd draw_pi_serial(const RegressionInputs& in, SamplerPolicy policy, const StreamKey& key);

}  // namespace mfvar
