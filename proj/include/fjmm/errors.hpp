#pragma once

#include <stdexcept>
#include <string>

namespace fjmm {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter is outside its documented range.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A matrix or family fails a structural invariant (stochasticity, sign, shape).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A row of an adjacency structure cannot be normalized (node without neighbors).
class NormalizationError : public Error {
 public:
  NormalizationError(int node, const std::string& what);
  int node() const noexcept { return node_; }

 private:
  int node_;
};

/// Random generation could not meet its postcondition within the retry budget.
class GenerationFailure : public Error {
 public:
  using Error::Error;
};

/// History or trajectory has the wrong shape for the requested operation.
class InvalidState : public Error {
 public:
  using Error::Error;
};

/// A non-finite value appeared during simulation.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// The requested quantity only exists for a stable model.
class InstabilityError : public Error {
 public:
  using Error::Error;
};

/// A property that holds for every correct implementation was violated.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// An iterative method did not reach its tolerance. Carries the best bracket.
class AccuracyError : public Error {
 public:
  AccuracyError(double lower, double upper, long iterations);
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  long iterations() const noexcept { return iterations_; }

 private:
  double lower_;
  double upper_;
  long iterations_;
};

/// Malformed input file or unreadable path.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace fjmm
