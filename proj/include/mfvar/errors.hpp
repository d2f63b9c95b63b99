#pragma once

#include <stdexcept>
#include <string>

namespace mfvar {

// Bad input: dimensions, configuration, data layout. CLI exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical breakdown inside a sampler block. CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Warnings go to stderr unless silenced (tests silence them).
void warn(const std::string& msg);
void set_warnings_enabled(bool on);

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

}  // namespace mfvar
