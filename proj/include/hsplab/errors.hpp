#pragma once

#include <stdexcept>
#include <string>

namespace hsplab {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A state, register, or dense matrix would exceed the configured dimension cap.
class DimensionCapExceeded : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotUnitary : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The oracle does not expose the controlled shift maps U_{f(x e_j)}.
class ShiftUnavailable : public Error {
 public:
  using Error::Error;
};

// The black box violates the coset promise it was supposed to satisfy.
class PromiseViolation : public Error {
 public:
  using Error::Error;
};

// A probabilistic solver used up its trial budget without a verified answer.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace hsplab
