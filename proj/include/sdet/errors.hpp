#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sdet {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero rational function") {}
};

class PoleError : public Error {
 public:
  explicit PoleError(const std::string& at) : Error("pole at u = " + at) {}
};

class NotProperError : public Error {
 public:
  NotProperError() : Error("not proper at infinity") {}
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : Error("parse error at position " + std::to_string(pos) + ": " + what),
        pos_(pos) {}
  std::size_t position() const noexcept { return pos_; }

 private:
  std::size_t pos_;
};

// Raised by extract_sdet when A_n X fails to be a scalar multiple of
// A_n(e_1 x ... x e_n) on the identity column.
class ExtractionError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class GoldenError : public Error {
 public:
  using Error::Error;
};

}  // namespace sdet
