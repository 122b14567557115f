#pragma once

#include <stdexcept>
#include <string>

namespace rkhs {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite or out-of-domain numeric input.
class InputDomainError : public Error {
 public:
  using Error::Error;
};

/// Mismatched dimensions or otherwise invalid API use.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// The observer design cannot be built (non-Hurwitz error dynamics,
/// duplicate centers, singular denominators, ...).
class DesignError : public Error {
 public:
  using Error::Error;
};

/// Grammian stayed indefinite after the maximum jitter.
class IllConditionedCentersError : public DesignError {
 public:
  IllConditionedCentersError(const std::string& what, double min_eigenvalue)
      : DesignError(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// Scenario file or override failed validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Integration produced a non-finite state or hit a kinematic singularity.
class SimulationAbort : public Error {
 public:
  using Error::Error;
};

}  // namespace rkhs
