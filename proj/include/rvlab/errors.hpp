#pragma once

#include <stdexcept>
#include <string>

namespace rvlab {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// NaN or Inf reached a matrix operation.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

// Matrix is (numerically) singular where an inverse is required.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

// Iterative kernel hit its iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// A lemma or theorem hypothesis does not hold on the supplied instance.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace rvlab
