#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace metallic {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised by the expression parser; position is a 0-based byte offset into
// the input text.
struct SyntaxError : Error {
  std::size_t position;
  SyntaxError(const std::string& msg, std::size_t pos)
      : Error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

struct UnknownIdentifier : Error {
  std::string name;
  explicit UnknownIdentifier(const std::string& ident)
      : Error("unknown identifier '" + ident + "'"), name(ident) {}
};

// Evaluation hit a point outside the domain of an operation
// (ln of a non-positive value, sqrt of a negative, division by zero, ...).
struct DomainError : Error {
  using Error::Error;
};

struct SchemaError : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct DegenerateMetric : Error {
  using Error::Error;
};

struct SingularMatrix : Error {
  using Error::Error;
};

struct NegativeDiscriminant : Error {
  using Error::Error;
};

struct WrongDiscriminant : Error {
  using Error::Error;
};

struct ZeroDiscriminant : Error {
  using Error::Error;
};

struct NotNorden : Error {
  using Error::Error;
};

}  // namespace metallic
