#pragma once

#include <stdexcept>
#include <string>

namespace paritydisp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violates an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two kets or operators live in different truncated spaces.
class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

/// Matrix exponential could not be computed reliably.
class ExpmError : public Error {
 public:
  using Error::Error;
};

/// Input claimed (or required) to be hermitian is not.
class NotHermitian : public Error {
 public:
  using Error::Error;
};

/// Two independent construction routes disagree beyond tolerance.
class Inconsistency : public Error {
 public:
  using Error::Error;
};

/// A numerical precondition on the truncation does not hold. Verification
/// code treats these as "skipped" rather than as failures.
class PreconditionFailure : public Error {
 public:
  using Error::Error;
};

/// |z| exceeds the safe radius for a degree m >= 3 generator.
class RadiusExceeded : public PreconditionFailure {
 public:
  using PreconditionFailure::PreconditionFailure;
};

/// Probability mass above the interior level exceeds the space's tail tolerance.
class TailMassExceeded : public PreconditionFailure {
 public:
  using PreconditionFailure::PreconditionFailure;
};

/// The truncated construction did not stabilise under dimension doubling.
class NotConverged : public PreconditionFailure {
 public:
  using PreconditionFailure::PreconditionFailure;
};

}  // namespace paritydisp
