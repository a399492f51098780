#pragma once

#include <stdexcept>
#include <string>

namespace agenda {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a documented invariant (bad file, unknown label, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A file could not be parsed. Carries the 1-based line number for line-oriented formats.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : ValidationError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The operation is well-formed but the current state does not allow it
/// (open disagreements, stale version, duplicate record, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace agenda
