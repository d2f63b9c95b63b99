#include "mfvar/rng.hpp"

#include <iostream>
#include <vector>

#include "mfvar/errors.hpp"

namespace mfvar {

namespace {
bool g_warnings = true;

std::seed_seq make_seq(std::uint64_t seed, std::initializer_list<std::uint64_t> key) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * (key.size() + 1));
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (auto k : key) push(k);
  return std::seed_seq(words.begin(), words.end());
}
}  // namespace

void warn(const std::string& msg) {
  if (g_warnings) std::cerr << "warning: " << msg << '\n';
}

void set_warnings_enabled(bool on) { g_warnings = on; }

RngStream::RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> key) {
  auto seq = make_seq(seed, key);
  engine_.seed(seq);
}

double RngStream::uniform() {
  // 53 random bits, shifted off zero
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::gamma(double shape, double scale) {
  std::gamma_distribution<double> g(shape, scale);
  return g(engine_);
}

double RngStream::beta(double a, double b) {
  double x = gamma(a);
  double y = gamma(b);
  return x / (x + y);
}

}  // namespace mfvar
