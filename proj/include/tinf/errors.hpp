#pragma once

#include <stdexcept>
#include <string>

namespace tinf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Array or block sizes that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Tangent order outside the range an operation accepts.
class OrderError : public Error {
 public:
  using Error::Error;
};

/// Evaluation of a program failed, e.g. log of a non-positive number.
///
/// `coordinate()` is the output coordinate whose evaluation failed, or -1
/// when the failure happened outside of any particular output.
class EvaluationError : public Error {
 public:
  explicit EvaluationError(const std::string& what, int coordinate = -1)
      : Error(coordinate < 0 ? what : what + " (output coordinate " + std::to_string(coordinate) + ")"),
        coordinate_(coordinate) {}

  int coordinate() const noexcept { return coordinate_; }

 private:
  int coordinate_;
};

/// Malformed expression text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at offset " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A structural invariant (section property, semispray property) failed on a
/// constructed object.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Invalid run parameters, e.g. a non-positive step size.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace tinf
