// Error taxonomy shared by all modules.
//
// PreconditionError : the caller handed us an input the contract rejects
//                     (grid mismatch, parameter out of range, bad geometry).
// NumericalError    : the computation itself degenerated (singular Gram,
//                     non-convergent iteration, degenerate regression).
// ConfigError       : a run configuration failed schema validation.

#pragma once

#include <stdexcept>
#include <string>

namespace fraccal {

struct PreconditionError : std::invalid_argument {
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fraccal
