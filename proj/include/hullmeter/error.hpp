#pragma once

#include <stdexcept>
#include <string>

namespace hullmeter {

// Bad input: wrong dimensions, non-Hermitian matrices, out-of-range flags.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical routine failed to meet its own contract (bisection budget,
// monotonicity of the see-saw, corrupted witness operators).
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hullmeter
