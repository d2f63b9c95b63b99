#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "mfvar/chain_store.hpp"
#include "mfvar/dataset.hpp"
#include "mfvar/fsv.hpp"
#include "mfvar/model.hpp"
#include "mfvar/priors.hpp"
#include "mfvar/regression.hpp"
#include "mfvar/smoother.hpp"

namespace mfvar {

struct McmcConfig {
  int iterations = 30000;
  int burn_in = 10000;
  int thin = 20;
  int lags = 6;
  int factors = 1;
  std::uint64_t seed = 1;
  std::uint64_t chain = 0;
  SamplerPolicy sampler = SamplerPolicy::automatic;
  SmootherVariant smoother = SmootherVariant::adaptive_univariate;
  int workers = 1;
  bool store_latent = false;
  double kappa = 100.0;
  std::string checkpoint_path;  // empty: no checkpoints
  int checkpoint_every = 0;     // iterations between checkpoints, 0: only on failure

  void validate() const;
  // Settings that determine the draws (worker count and checkpointing excluded).
  std::string canonical() const;
};

struct PriorSet {
  MinnesotaConfig minnesota;
  FsvPriorConfig fsv;
};

// Minnesota scales from AR(4) residuals; lambda1 = 0.1 above 100 variables.
PriorSet default_priors(const MixedFrequencyDataset& data);

inline const std::vector<std::string>& block_order() {
  static const std::vector<std::string> order = {"sv_params",  "loadings",   "factors", "regression",
                                                 "latent",     "indicators", "logvol"};
  return order;
}

struct SamplerState {
  std::int64_t iteration = 0;  // completed sweeps
  VarParameters params;
  FsvState fsv;
  MatrixXd x;              // T x n
  MatrixXd idio_ystar;     // T_eff x n, log(nu^2 + c)
  MatrixXd factor_ystar;   // T_eff x r
  Eigen::MatrixXi idio_ind;    // T_eff x n mixture indicators
  Eigen::MatrixXi factor_ind;  // T_eff x r
};

using BlockObserver = std::function<void(std::int64_t iteration, const std::string& block)>;

SamplerState initialize(const MixedFrequencyDataset& data, const McmcConfig& cfg, const PriorSet& priors);

// One sweep in the fixed block order. timings (optional) accumulates seconds per block.
void gibbs_sweep(SamplerState& state, const MixedFrequencyDataset& data, const McmcConfig& cfg,
                 const PriorSet& priors, const BlockObserver& observer = {},
                 std::map<std::string, double>* timings = nullptr,
                 std::map<std::string, double>* accepted = nullptr);

ChainStore run_mcmc(const McmcConfig& cfg, const MixedFrequencyDataset& data, const PriorSet& priors,
                    const BlockObserver& observer = {});

// Continue a run from a checkpoint file written by run_mcmc.
ChainStore resume_mcmc(const std::string& checkpoint, const MixedFrequencyDataset& data,
                       const BlockObserver& observer = {});

// residuals u_t = x_t - Pi' X_t over the effective sample
MatrixXd var_residuals(const MatrixXd& x, const VarParameters& params);

// T x n conditioning blocks for the latent-data step
SmootherConditioning smoother_conditioning(const FsvState& fsv, int periods, int lags);

}  // namespace mfvar
