#pragma once

#include <stdexcept>
#include <string>

namespace jclass {

// Base for all library errors so callers can catch the whole family at once.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Recipe or parameter constraint violation; the message names the constraint.
class ValidationError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Zero raised to a negative power, inverse of a non-invertible member, etc.
class SingularError : public Error {
 public:
  using Error::Error;
};

// Decode out of range under the error policy. Carries the offending sign and
// log-magnitude, and the coordinate index when raised from a vector apply.
class RangeError : public Error {
 public:
  RangeError(const std::string& what, int sign, double log_mag, int coordinate = -1)
      : Error(what), sign(sign), log_mag(log_mag), coordinate(coordinate) {}
  int sign;
  double log_mag;
  int coordinate;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace jclass
