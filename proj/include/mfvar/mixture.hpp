#pragma once

#include <array>

namespace mfvar {

// Ten-component normal mixture approximating log(eps^2), eps ~ N(0,1)
// (Omori, Chib, Shephard and Nakajima 2007).
struct MixtureTable {
  static constexpr int kComponents = 10;
  std::array<double, kComponents> prob;
  std::array<double, kComponents> mean;
  std::array<double, kComponents> var;

  double mixture_mean() const;
  double mixture_variance() const;

  static const MixtureTable& omori();
};

}  // namespace mfvar
