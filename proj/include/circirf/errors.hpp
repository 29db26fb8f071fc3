#pragma once

#include <stdexcept>
#include <string>

namespace circirf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad user-supplied configuration (non-unisolvent points, invalid spectra, ...).
class ConfigurationError : public Error {
public:
  using Error::Error;
};

class UnsupportedOrderError : public Error {
public:
  using Error::Error;
};

/// Semivariogram shift c0 below the admissible bound.
class InvalidShiftError : public Error {
public:
  using Error::Error;
  InvalidShiftError(const std::string& what, double bound) : Error(what), bound_(bound) {}
  double bound() const noexcept { return bound_; }

private:
  double bound_ = 0.0;
};

/// Semi-norm would be infinite: energy at a frequency with no spectral mass.
class InfiniteNormError : public Error {
public:
  using Error::Error;
};

class InsufficientDataError : public Error {
public:
  using Error::Error;
};

class DuplicateLocationError : public Error {
public:
  using Error::Error;
};

/// A linear system is singular or too badly conditioned to trust.
class ConditioningError : public Error {
public:
  using Error::Error;
};

/// Requested spectral truncation exceeds what the sampling grid can resolve.
class AliasingError : public Error {
public:
  using Error::Error;
};

class PreconditionError : public Error {
public:
  using Error::Error;
};

class NumericalError : public Error {
public:
  using Error::Error;
};

}  // namespace circirf
