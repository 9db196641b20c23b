#pragma once

#include <stdexcept>
#include <string>

namespace covdepth {

/// Base class for all covdepth errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A documented precondition of an operation was violated
/// (bad parameters, spec mismatch, cap exceeded, ...).
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

/// Input data could not be parsed (matrix files, rationals, ...).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

}  // namespace covdepth
