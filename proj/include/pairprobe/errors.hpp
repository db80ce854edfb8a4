#pragma once

#include <stdexcept>
#include <string>

namespace pairprobe {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: malformed config, violated layout or medium invariants.
/// The CLI maps this family to exit status 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class LayoutError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// A computation that could not produce a trustworthy number.
/// The CLI maps this family to exit status 1.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SolverFailure : public NumericalError {
 public:
  SolverFailure(const std::string& what, double residual, int iterations)
      : NumericalError(what), residual_(residual), iterations_(iterations) {}
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

class InterpolationDomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NearSingularSystem : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateBackscatter : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class AmbiguousAlignment : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IllConditionedProbe : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class FitDomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace pairprobe
