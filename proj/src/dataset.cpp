#include "mfvar/dataset.hpp"

#include <cmath>

#include "mfvar/errors.hpp"

namespace mfvar {

MixedFrequencyDataset::MixedFrequencyDataset(MatrixXd monthly, MatrixXd quarterly, int quarter_phase,
                                             std::vector<std::string> names)
    : monthly_(std::move(monthly)), quarterly_(std::move(quarterly)), phase_(quarter_phase), names_(std::move(names)) {
  require(phase_ >= 0 && phase_ <= 2, "quarter phase must be 0, 1 or 2");
  require(monthly_.rows() == quarterly_.rows(), "monthly and quarterly panels must have the same number of periods");
  require(monthly_.rows() > 0, "dataset has no periods");
  if (names_.empty()) {
    for (int j = 0; j < n_monthly(); ++j) names_.push_back("m" + std::to_string(j + 1));
    for (int j = 0; j < n_quarterly(); ++j) names_.push_back("q" + std::to_string(j + 1));
  }
  require(static_cast<int>(names_.size()) == n_vars(), "one name per series required");

  const int T = periods();
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < n_monthly(); ++j)
      if (std::isinf(monthly_(t, j))) throw ValidationError("infinite monthly value at period " + std::to_string(t));
    for (int j = 0; j < n_quarterly(); ++j) {
      double v = quarterly_(t, j);
      if (std::isnan(v)) continue;
      if (!std::isfinite(v)) throw ValidationError("infinite quarterly value at period " + std::to_string(t));
      if (!is_quarter_end(t))
        throw ValidationError("quarterly series '" + names_[n_monthly() + j] + "' has a value at period " +
                              std::to_string(t) + ", which is not a quarter-end month");
    }
  }

  patterns_.resize(T);
  first_missing_.assign(n_monthly(), T);
  balanced_end_ = T - 1;
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < n_monthly(); ++j) {
      if (monthly_observed(t, j)) {
        patterns_[t].monthly.push_back(j);
      } else {
        if (first_missing_[j] == T) first_missing_[j] = t;
        if (balanced_end_ >= t) balanced_end_ = t - 1;
      }
    }
    for (int j = 0; j < n_quarterly(); ++j)
      if (quarterly_usable(t, j)) patterns_[t].quarterly.push_back(j);
  }
}

}  // namespace mfvar
