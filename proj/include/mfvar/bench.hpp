#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfvar/dataset.hpp"
#include "mfvar/fsv.hpp"
#include "mfvar/model.hpp"
#include "mfvar/smoother.hpp"

namespace mfvar {

// Synthetic mixed-frequency system drawn from a fixed-seed stationary VAR
// with factor stochastic volatility.
struct SyntheticSpec {
  int n_monthly = 6;
  int n_quarterly = 1;
  int lags = 5;
  int periods = 240;
  int factors = 1;
  std::uint64_t seed = 1;
  double max_radius = 0.9;
  bool ragged = true;     // staggered monthly delays and a delayed quarterly release
  int day_of_month = 15;  // snapshot day of the ragged edge
};

struct SyntheticSystem {
  VarParameters params;
  FsvState fsv;  // effective sample: rows lags..periods-1
  MatrixXd x;    // periods x n, true latent monthly path
  MixedFrequencyDataset data;
};

VarParameters random_stationary_var(int n_monthly, int n_quarterly, int lags, double max_radius, std::uint64_t seed);
SyntheticSystem make_synthetic(const SyntheticSpec& spec);

struct BenchSpec {
  std::vector<int> n_vars;  // total variables, quarterly included
  std::vector<int> lags;
  std::vector<SmootherVariant> variants = {SmootherVariant::companion, SmootherVariant::adaptive,
                                           SmootherVariant::adaptive_univariate};
  int day_of_month = 15;
  int repetitions = 3;
  int n_quarterly = 1;
  int periods = 240;
  std::uint64_t seed = 1;
  int workers = 1;

  void validate() const;
  static BenchSpec from_json(const std::string& text);
};

struct BenchRow {
  SmootherVariant variant;
  int n_vars = 0;
  int lags = 0;
  int n_quarterly = 0;
  double median_seconds = 0;
  double min_seconds = 0;
  double max_abs_diff = 0;  // draw disagreement with the first variant
};

struct BenchTable {
  std::vector<BenchRow> rows;
  int workers = 1;
  int repetitions = 0;
  const BenchRow& find(SmootherVariant v, int n, int p) const;
};

// Times one simulation-smoother draw per repetition after checking that all
// variants give the same draw from the same stream (tolerance 1e-6).
BenchTable bench_smoothers(const BenchSpec& spec);
void write_bench_csv(const BenchTable& table, const std::string& path);

}  // namespace mfvar
