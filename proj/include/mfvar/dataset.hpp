#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mfvar/linalg.hpp"

namespace mfvar {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

struct ObservationPattern {
  std::vector<int> monthly;    // observed monthly indices
  std::vector<int> quarterly;  // observed quarterly indices (usable ones only)
};

// Back-transformation constants: raw = center + scale * standardized.
struct Standardization {
  VectorXd center;
  VectorXd scale;
  bool empty() const { return center.size() == 0; }
};

// Monthly panel with NaN marking missing values. Quarterly columns hold the
// observed quarterly value at quarter-end months and NaN elsewhere.
//
// Periods are 0-based. A quarterly observation at t < 4 is kept in the data
// but not in the observation pattern: its aggregation window reaches before
// the first period.
class MixedFrequencyDataset {
 public:
  MixedFrequencyDataset() = default;
  MixedFrequencyDataset(MatrixXd monthly, MatrixXd quarterly, int quarter_phase = 2,
                        std::vector<std::string> names = {});

  int periods() const { return static_cast<int>(monthly_.rows()); }
  int n_monthly() const { return static_cast<int>(monthly_.cols()); }
  int n_quarterly() const { return static_cast<int>(quarterly_.cols()); }
  int n_vars() const { return n_monthly() + n_quarterly(); }
  int quarter_phase() const { return phase_; }
  bool is_quarter_end(int t) const { return t % 3 == phase_; }

  const MatrixXd& monthly() const { return monthly_; }
  const MatrixXd& quarterly() const { return quarterly_; }
  const std::vector<std::string>& names() const { return names_; }
  const ObservationPattern& pattern(int t) const { return patterns_[t]; }

  bool monthly_observed(int t, int j) const { return !std::isnan(monthly_(t, j)); }
  bool quarterly_usable(int t, int j) const { return t >= 4 && !std::isnan(quarterly_(t, j)); }

  // Last period (0-based) up to which every monthly series is observed at
  // every period. -1 if the first period already has a gap.
  int balanced_end() const { return balanced_end_; }
  // First missing period of monthly series j, or periods() if never missing.
  int first_missing(int j) const { return first_missing_[j]; }

  Standardization standardization;

 private:
  MatrixXd monthly_;
  MatrixXd quarterly_;
  int phase_ = 2;
  std::vector<std::string> names_;
  std::vector<ObservationPattern> patterns_;
  int balanced_end_ = -1;
  std::vector<int> first_missing_;
};

}  // namespace mfvar
