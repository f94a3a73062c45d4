#pragma once

#include <stdexcept>
#include <string>

namespace cwphase {

/// Invalid parameters or a configuration that violates a sampler/filter precondition.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A filter or estimator left its valid numerical regime (lost positivity, underflow, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cwphase
