#pragma once

#include <stdexcept>
#include <string>

namespace pispace {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// restrict() past the end of a finite sequence
class RangeError : public Error {
 public:
  using Error::Error;
};

// an operation that needs a nonempty set received an empty one
class EmptySetError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// the oracle window does not cover every mention of the expression
class WindowError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class StrictnessError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pispace
