#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace charflow {

/// Base of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed config, unsupported case/law pair, precondition violated by the caller.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (ln of a negative, vacuum state, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed: non-convergence, singular denominator, characteristic crossing.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  enum class Kind { syntax, unknown_identifier, arity };

  ParseError(Kind kind, std::size_t offset, const std::string& what)
      : Error(what + " at offset " + std::to_string(offset)), kind_(kind), offset_(offset) {}

  Kind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

}  // namespace charflow
