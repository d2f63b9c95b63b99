#pragma once

#include <vector>

#include "mfvar/linalg.hpp"
#include "mfvar/priors.hpp"
#include "mfvar/rng.hpp"
#include "mfvar/stochvol.hpp"

namespace mfvar {

// u_t = Lambda f_t + nu_t over the effective sample (rows are periods p..T-1).
struct FsvState {
  MatrixXd loadings;       // n x r
  MatrixXd factors;        // T_eff x r
  MatrixXd idio_logvol;    // T_eff x n, log omega^nu
  MatrixXd factor_logvol;  // T_eff x r, log omega^f
  std::vector<SvParams> idio_params;    // n
  std::vector<SvParams> factor_params;  // r, mu fixed at 0

  int n_vars() const { return static_cast<int>(loadings.rows()); }
  int n_factors() const { return static_cast<int>(loadings.cols()); }
  Index periods() const { return idio_logvol.rows(); }
  void validate() const;
  // T_eff x n matrix of Lambda f_t
  MatrixXd common_component() const { return factors * loadings.transpose(); }
};

struct SigmaT {
  MatrixXd sigma;
  MatrixXd chol;  // lower
};

SigmaT sigma_t(const FsvState& fsv, Index t);

// f_t | u_t ~ N(V Lambda' Omega_nu^{-1} u_t, V), V = (Lambda' Omega_nu^{-1} Lambda + Omega_f^{-1})^{-1}.
// noise: T_eff x r standard normals (zero gives the posterior mean).
MatrixXd draw_factors(const MatrixXd& loadings, const MatrixXd& resid, const MatrixXd& idio_var,
                      const MatrixXd& factor_var, const MatrixXd& noise, int workers = 1);
MatrixXd draw_factors(const MatrixXd& loadings, const MatrixXd& resid, const MatrixXd& idio_var,
                      const MatrixXd& factor_var, RngStream& rng, int workers = 1);

// Row i regresses u_i on f with variances omega^nu_i and prior N(0, loading_var).
// With r > 1 the loadings matrix is lower triangular (row i uses the first
// min(i+1, r) factors). noise: n x r standard normals.
MatrixXd draw_loadings(const MatrixXd& factors, const MatrixXd& resid, const MatrixXd& idio_var,
                       const FsvPriorConfig& prior, const MatrixXd& noise, int workers = 1);
MatrixXd draw_loadings(const MatrixXd& factors, const MatrixXd& resid, const MatrixXd& idio_var,
                       const FsvPriorConfig& prior, RngStream& rng, int workers = 1);

}  // namespace mfvar
