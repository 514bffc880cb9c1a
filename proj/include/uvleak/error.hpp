#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uvleak {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourceLocation {
  size_t line = 1;
  size_t column = 1;
};

// Syntax error or unresolved identifier in concrete syntax.
class ParseError : public Error {
 public:
  ParseError(SourceLocation loc, const std::string& message)
      : Error(std::to_string(loc.line) + ":" + std::to_string(loc.column) +
              ": " + message),
        location_(loc),
        message_(message) {}

  SourceLocation location() const { return location_; }
  const std::string& bare_message() const { return message_; }

 private:
  SourceLocation location_;
  std::string message_;
};

// An operation was called outside its precondition (bad lookahead,
// mismatched register sets, non-combinatorial monitor, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration would exceed its configured state limit.
class DomainTooLarge : public Error {
 public:
  using Error::Error;
};

// Solver gave up (conflict budget or wall-clock limit).
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

// Temporal evaluation needed more cycles than the caller allowed.
class HorizonExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace uvleak
