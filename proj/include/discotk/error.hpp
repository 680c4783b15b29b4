#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace discotk {

/// Raised for malformed or inconsistent input data (files, records, matrices).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in a serialized tree, with the byte offset where parsing failed.
class ParseError : public DataError {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : DataError(message + " at byte " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace discotk
