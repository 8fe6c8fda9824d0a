#pragma once

#include <stdexcept>
#include <string>

namespace regphase {

// Base of every failure raised by the library. The CLI maps all of these
// to exit code 2 except BoundViolation, which signals a failed check.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// (E^+)^k |psi> would need levels at or above dim.
class TruncationOverflow : public Error {
 public:
  using Error::Error;
};

class BoundViolation : public Error {
 public:
  using Error::Error;
};

class TailMassError : public Error {
 public:
  using Error::Error;
};

class QuadratureUnderResolved : public Error {
 public:
  using Error::Error;
};

class GridUnderResolved : public Error {
 public:
  using Error::Error;
};

class InvalidDensity : public Error {
 public:
  using Error::Error;
};

}  // namespace regphase
