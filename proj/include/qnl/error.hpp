#pragma once

#include <stdexcept>
#include <string>

namespace qnl {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NotHermitianError : public Error {
 public:
  using Error::Error;
};

// A parameter is outside the domain of the operation.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Inputs for which the requested construction does not exist (e.g. a POVM for
// identical or orthogonal states).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// A closed form disagreed with its tensor-product cross-check.
class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace qnl
