#pragma once

#include <stdexcept>
#include <string>

namespace fpt {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input (config, catalog entry, orbit definition).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Base for failures of the numerical pipeline.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Trajectory came within the singularity floor of a primary.
class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Step-size underflow or step budget exhausted.
class IntegrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The position-to-costate block of the STM cannot be reliably inverted.
class IllConditionedError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Newton shooting failed (iteration budget, stagnation, damping exhausted).
class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace fpt
