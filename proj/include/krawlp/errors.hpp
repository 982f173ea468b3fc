#pragma once

#include <stdexcept>
#include <string>

namespace krawlp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arithmetic outside the domain of an operation (e.g. inverting zero).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested operation exists only for some fields (q = 2 paths).
class UnsupportedFieldError : public Error {
 public:
  using Error::Error;
};

/// A configurable size cap would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A pseudoprobability program was requested below level n.
class LevelError : public Error {
 public:
  using Error::Error;
};

/// Malformed input: unknown names, parse failures, invalid parameters.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of a construction does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace krawlp
