#pragma once

#include <stdexcept>
#include <string>

namespace hyperid {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A gamma argument (or an unpaired gamma-ratio argument) sits on a pole.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Division by an exact or numerical zero.
class DivisionByZero : public Error {
 public:
  using Error::Error;
};

/// Inputs violate the hypotheses of an operation or identity.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

/// A bottom parameter is a nonpositive integer not dominated by a
/// terminating top parameter.
class InadmissibleBottom : public PreconditionViolation {
 public:
  using PreconditionViolation::PreconditionViolation;
};

/// The series is outside the supported convergence regions.
class DivergentSeries : public PreconditionViolation {
 public:
  using PreconditionViolation::PreconditionViolation;
};

/// (c-b-m)_m vanishes, so the characteristic polynomial is undefined.
class DegenerateQ : public PreconditionViolation {
 public:
  using PreconditionViolation::PreconditionViolation;
};

/// The expanded beta vector of the multi-parameter Karlsson sum has
/// repeated entries.
class DuplicateBeta : public PreconditionViolation {
 public:
  using PreconditionViolation::PreconditionViolation;
};

/// Series acceleration did not stabilize within the iteration budget.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Aberth iteration could not reach the residual tolerance.
class RootFindingFailure : public Error {
 public:
  using Error::Error;
};

/// A value cannot be represented exactly (e.g. gamma of a non-integer
/// rational requested in exact mode).
class NotExact : public Error {
 public:
  using Error::Error;
};

/// The sampler hit its retry bound without producing an admissible case.
class SamplingExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace hyperid
