#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace medsearch {

/// Caller supplied a value outside an operation's domain.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bad training / service / boost configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Persisted data is missing, corrupt, or inconsistent.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed XML input. `byte_offset` points into the (decompressed) batch.
class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t byte_offset)
      : DataError(what + " at byte " + std::to_string(byte_offset)),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

/// The query has no tokens left after stopword removal.
class EmptyQueryError : public InputError {
 public:
  EmptyQueryError() : InputError("query is empty after stopword removal") {}
};

}  // namespace medsearch
