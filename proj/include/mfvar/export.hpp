#pragma once

#include <string>
#include <vector>

#include "mfvar/chain_store.hpp"
#include "mfvar/diagnostics.hpp"

namespace mfvar {

struct Table {
  std::vector<std::string> columns;
  MatrixXd values;
};

// Selectors:
//   pi_mean      n x (np+1) posterior mean of Pi (regressor order)
//   pi_draws     draws x n(np+1), row-major per draw
//   loadings     draws x nr, sign-identified
//   factor_vol   T_eff x 3r, 10/50/90 percentiles of exp(h/2) per factor
//   idio_vol     T_eff x 3n, same for idiosyncratic terms
//   gdp_vol      T_eff x 3, percentiles of the quarterly sd of the first quarterly series
//   latent_gdp   T x 3 n_q, percentiles of the latent monthly values
//   sv_params    draws x 3(n+r), (mu, phi, sigma) per chain
//   if_summary   groups x 8
const std::vector<std::string>& export_selectors();
Table export_table(const ChainStore& store, const std::string& what,
                   VolAggregation mode = VolAggregation::squared_weights);

// format: "csv" or "bin" (standalone binary matrix file)
void write_table(const Table& t, const std::string& format, const std::string& path);

}  // namespace mfvar
