#pragma once

#include <stdexcept>
#include <string>

namespace annulus {

/// Base class for all library failures that carry a diagnostic message.
/// Subclasses exist so callers can map failure categories to exit codes
/// without string matching.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration or input rejected before any numerics ran.
struct ConfigError : Error {
  using Error::Error;
};

/// A numeric routine failed to produce a trustworthy result.
struct NumericalError : Error {
  using Error::Error;
};

/// File-system level failure (open/read/write/rename).
struct IoError : Error {
  using Error::Error;
};

struct DegenerateCoefficient : NumericalError {
  using NumericalError::NumericalError;
};

struct SingularBorderedSystem : NumericalError {
  using NumericalError::NumericalError;
};

struct CorrectorFailure : NumericalError {
  using NumericalError::NumericalError;
};

struct AmbiguousCrossing : NumericalError {
  using NumericalError::NumericalError;
};

struct ResolutionTooLow : ConfigError {
  using ConfigError::ConfigError;
};

struct EigensolveFailure : NumericalError {
  using NumericalError::NumericalError;
};

struct NoNeutralPoint : NumericalError {
  using NumericalError::NumericalError;
};

struct NoCrossing : NumericalError {
  using NumericalError::NumericalError;
};

struct MissingProfile : ConfigError {
  using ConfigError::ConfigError;
};

struct DegenerateField : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace annulus
