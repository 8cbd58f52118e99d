#pragma once

#include <stdexcept>
#include <string>

namespace ridgevar {

// Invalid user-supplied data or configuration (bad dimensions, out-of-range
// hyperparameters, unstable DGP requested for simulation). CLI exit code 2.
class input_error : public std::invalid_argument {
 public:
  explicit input_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numerical failure mid-computation (near-singular penalized system,
// eigensolver non-convergence, Cholesky breakdown). CLI exit code 3.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ridgevar
