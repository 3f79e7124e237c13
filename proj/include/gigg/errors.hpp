#pragma once

#include <stdexcept>
#include <string>

namespace gigg {

// Root of the library's exception hierarchy. Every error the library raises
// derives from this, so callers (the CLI in particular) can map families of
// failures onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A distribution or function was called outside its parameter domain.
class ParameterDomainError : public Error {
 public:
  using Error::Error;
};

// An iterative numerical procedure (quadrature, Newton, power iteration,
// importance sampling) failed to reach its tolerance. `achieved` carries the
// best error estimate reached before giving up.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double achieved = 0.0)
      : Error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

// A chain carries no variation, so a variance-based diagnostic is undefined.
class DegenerateChainError : public Error {
 public:
  using Error::Error;
};

// A factorization failed (rank-deficient or not positive definite).
class LinearAlgebraError : public Error {
 public:
  using Error::Error;
};

// Hyperparameter calibration target outside the reachable range.
class CalibrationError : public Error {
 public:
  using Error::Error;
};

// Invalid simulation scenario or coefficient pattern.
class ScenarioError : public Error {
 public:
  using Error::Error;
};

// Malformed user input (CSV syntax, bad values, unparsable config).
class InputError : public Error {
 public:
  using Error::Error;
};

// Input is well-formed but inconsistent (group map vs. CSV columns).
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace gigg
