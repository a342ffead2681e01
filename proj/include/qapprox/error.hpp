#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qapprox {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte position of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or argument (wrong sizes, bad grid, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Denominator B^T H(x) fell below delta at grid point `point_index`.
class PositivityError : public Error {
 public:
  PositivityError(const std::string& what, std::size_t point_index)
      : Error(what), point_index_(point_index) {}
  std::size_t point_index() const noexcept { return point_index_; }

 private:
  std::size_t point_index_;
};

class InfeasibleStartError : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration refused because the instance is too large.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace qapprox
