#pragma once

#include <stdexcept>
#include <string>

namespace edgechain {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Arguments outside the domain of an operation (t <= s, bad indices).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A coefficient or innovation function returned a non-finite value.
class ModelEvaluationError : public Error {
  public:
    using Error::Error;
};

/// Cumulant or derivative order outside the supported range.
class UnsupportedOrderError : public Error {
  public:
    using Error::Error;
};

/// Singular or badly conditioned covariance.
class ConditioningError : public Error {
  public:
    using Error::Error;
};

/// A kernel cannot supply what an operator needs (derivative order, localization, dimension).
class CapabilityError : public Error {
  public:
    using Error::Error;
};

/// Quadrature refinement disagreed by more than the allowed amount.
class AccuracyError : public Error {
  public:
    AccuracyError(const std::string& what, double coarse, double fine)
        : Error(what), coarse_(coarse), fine_(fine) {}
    double coarse() const { return coarse_; }
    double fine() const { return fine_; }

  private:
    double coarse_;
    double fine_;
};

/// Truncated series could not reach the requested tail tolerance.
class TruncationError : public Error {
  public:
    TruncationError(const std::string& what, double bound) : Error(what), bound_(bound) {}
    double bound() const { return bound_; }

  private:
    double bound_;
};

/// Fourier inversion grid too coarse (aliasing detected).
class ResolutionError : public Error {
  public:
    using Error::Error;
};

/// Probability mass leaked through the boundary of a spatial grid.
class GridExtentError : public Error {
  public:
    using Error::Error;
};

/// Malformed or unknown configuration entries.
class ConfigError : public Error {
  public:
    using Error::Error;
};

}  // namespace edgechain
