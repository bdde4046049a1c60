#pragma once

#include <stdexcept>
#include <string>

namespace searchspace {

/// Base of every error thrown by the library. The CLI maps each subclass to
/// its own exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A user-supplied value was rejected (empty label, p0 >= 1, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Objects that must share a shape do not (node counts, sample groups).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A precondition of an operation was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A file did not match its schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace searchspace
