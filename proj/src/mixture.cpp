#include "mfvar/mixture.hpp"

namespace mfvar {

const MixtureTable& MixtureTable::omori() {
  static const MixtureTable table{
      {0.00609, 0.04775, 0.13057, 0.20674, 0.22715, 0.18842, 0.12047, 0.05591, 0.01575, 0.00115},
      {1.92677, 1.34744, 0.73504, 0.02266, -0.85173, -1.97278, -3.46788, -5.55246, -8.68384, -14.65000},
      {0.11265, 0.17788, 0.26768, 0.40611, 0.62699, 0.98583, 1.57469, 2.54498, 4.16591, 7.33342},
  };
  return table;
}

double MixtureTable::mixture_mean() const {
  double m = 0.0;
  for (int j = 0; j < kComponents; ++j) m += prob[j] * mean[j];
  return m;
}

double MixtureTable::mixture_variance() const {
  const double mu = mixture_mean();
  double v = 0.0;
  for (int j = 0; j < kComponents; ++j) v += prob[j] * (var[j] + (mean[j] - mu) * (mean[j] - mu));
  return v;
}

}  // namespace mfvar
