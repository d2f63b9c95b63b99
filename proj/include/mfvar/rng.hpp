#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mfvar {

// Stream identifiers for the keyed generator. A stream is fully determined by
// (seed, chain, iteration, block, index), so draws do not depend on which
// worker runs a task or in what order.
enum class Block : std::uint64_t {
  init = 1,
  sv_params = 2,
  loadings = 3,
  factors = 4,
  regression = 5,
  latent = 6,
  indicators = 7,
  logvol = 8,
  bench = 9,
  synthetic = 10,
  test = 11,
};

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> key);

  double normal() { return normal_(engine_); }
  // open interval (0, 1)
  double uniform();
  double gamma(double shape, double scale = 1.0);
  double beta(double a, double b);
  double chi_squared(double df) { return gamma(0.5 * df, 2.0); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline RngStream make_stream(std::uint64_t seed, std::uint64_t chain, std::uint64_t iteration, Block block,
                             std::uint64_t index = 0) {
  return RngStream(seed, {chain, iteration, static_cast<std::uint64_t>(block), index});
}

}  // namespace mfvar
