#pragma once

#include <stdexcept>
#include <string>

namespace insdecay {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Array or grid shapes that do not agree.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// A parameter outside its admissible range.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// max|u| dt / dx exceeded the configured Courant limit.
class CflViolation : public Error {
 public:
  CflViolation(double courant, double limit)
      : Error("CFL violation: courant number " + std::to_string(courant) +
              " exceeds limit " + std::to_string(limit)),
        courant_(courant),
        limit_(limit) {}

  double courant() const noexcept { return courant_; }
  double limit() const noexcept { return limit_; }

 private:
  double courant_;
  double limit_;
};

/// Density left the band [min rho0 - delta, max rho0 + delta] or became non-positive.
class DensityBoundsViolation : public Error {
 public:
  using Error::Error;
};

/// The density-weighted projection did not reach its tolerance.
class ProjectionNotConverged : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration, with the offending field and (when known) line.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace insdecay
