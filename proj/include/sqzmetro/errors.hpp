#pragma once

#include <stdexcept>
#include <string>

namespace sqzmetro {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sizes that do not fit together (mode counts, vector lengths, matrix shapes).
class InvalidDimension : public Error {
 public:
  using Error::Error;
};

/// Mode index outside [0, modes).
class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Input that violates a type invariant (negative weight, non-unitary matrix, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A Gaussian state that is no longer pure within tolerance.
class InvalidState : public Error {
 public:
  using Error::Error;
};

/// Fock truncation whose certified tail exceeds the requested tolerance.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, int suggested_cutoff)
      : Error(what), suggested_cutoff_(suggested_cutoff) {}

  /// Smallest even cutoff that satisfies the tolerance.
  int suggested_cutoff() const noexcept { return suggested_cutoff_; }

 private:
  int suggested_cutoff_;
};

/// Error propagation evaluated where d<O>/dphi vanishes.
class SingularBiasPoint : public Error {
 public:
  using Error::Error;
};

/// Sensitivity or estimator requested for a probe with no photons.
class UndefinedSensitivity : public Error {
 public:
  using Error::Error;
};

/// Sweep point outside the small-phase expansion regime.
class RegimeViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace sqzmetro
