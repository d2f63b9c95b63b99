#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mfvar/dataset.hpp"
#include "mfvar/kalman.hpp"
#include "mfvar/model.hpp"
#include "mfvar/rng.hpp"

namespace mfvar {

enum class SmootherVariant {
  companion,            // compact + multivariate filter, full companion after the balanced end
  adaptive,             // compact + multivariate filter, adaptive augmentation in the ragged edge
  adaptive_univariate,  // same states, univariate filtering throughout
  full_companion,       // companion form over the whole sample (reference)
};

std::string variant_name(SmootherVariant v);
SmootherVariant parse_variant(const std::string& s);

// Conditioning blocks of the latent-data step, per period (T x n):
// shift_t = Lambda f_t and idio_var_t = omega^nu_t. Rows before the lag depth
// are not used.
struct SmootherConditioning {
  MatrixXd shift;
  MatrixXd idio_var;
};

// Values read at the dataset's observed positions: the data itself, or a
// simulated path observed through the same pattern.
struct ObservationSource {
  const MatrixXd* monthly = nullptr;    // T x n_m
  const MatrixXd* quarterly = nullptr;  // T x n_q (aggregated values at quarter-ends)
};

// Which latent values x_{v,s} the state holds at period t.
//  block layout:     (x_{q,t}, ..., x_{q,t-L}) then augmented monthly entries
//  companion layout: (x_t, ..., x_{t-L+1}) with all n variables per slot
struct StateLayout {
  bool companion = false;
  int t = 0;
  int lag_depth = 0;
  int n_monthly = 0;
  int n_quarterly = 0;
  std::vector<std::pair<int, int>> augmented;  // (monthly variable, period), sorted

  int dim() const;
  // state index of x_{var,period}, -1 if not in the state
  int locate(int var, int period) const;
  std::pair<int, int> element(int idx) const;
};

struct SmootherDraw {
  MatrixXd x;     // T x n latent monthly path
  double loglik;  // log-likelihood of the data given the conditioning blocks
};

// Simulation smoother for the latent monthly path x | Pi, Lambda, f, Omega, y.
//
// The first L - 1 periods (L = max(p, 5)) are a presample: monthly values
// there are conditioned on and must be observed; the quarterly latent values
// start from N(0, kappa I).
class MixedFrequencySmoother {
 public:
  MixedFrequencySmoother(const VarParameters& params, const MixedFrequencyDataset& data, double kappa = 100.0);

  int lag_depth() const { return L_; }
  int first_step() const { return L_ - 1; }
  const VarParameters& padded_params() const { return params_; }

  std::vector<StateLayout> layouts(SmootherVariant v) const;
  std::vector<StepModel> build_steps(SmootherVariant v, const SmootherConditioning& cond,
                                     const std::vector<ObservationSource>& sources) const;

  // E[x | y] and the log-likelihood.
  SmootherDraw smoothed_mean(SmootherVariant v, const SmootherConditioning& cond) const;
  SmootherDraw draw(SmootherVariant v, const SmootherConditioning& cond, RngStream& rng) const;

  // Unconditional path x+ from the model (presample monthly values from data).
  MatrixXd simulate_path(const SmootherConditioning& cond, RngStream& rng) const;
  // Quarterly observations implied by a path, NaN where the data has none.
  MatrixXd observe_quarterly(const MatrixXd& path) const;

 private:
  void check_conditioning(const SmootherConditioning& cond) const;
  MatrixXd extract(const std::vector<StateLayout>& layouts, const SmootherOutput& sm, Index column,
                   const ObservationSource& src) const;

  VarParameters params_;
  const MixedFrequencyDataset& data_;
  double kappa_;
  int L_;
  StateSpaceSystem compact_;
};

}  // namespace mfvar
