#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace emodeng {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed dictionary, paradigm, rule or config text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column,
             std::string source = {});

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& source() const { return source_; }
  const std::string& bare_message() const { return bare_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string source_;
  std::string bare_;
};

class InflectionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class StoreError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public StoreError {
 public:
  using StoreError::StoreError;
};

// A state transition the record does not allow (deciding twice).
class ConflictError : public StoreError {
 public:
  using StoreError::StoreError;
};

}  // namespace emodeng
