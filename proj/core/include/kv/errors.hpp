#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace kv {

/// Root of every error raised by the kv libraries.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violated a documented precondition. `field()` names the culprit
/// when one can be singled out.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// sigma == 0 or T == 0 reached the closed-form pricer; callers should use
/// discounted_intrinsic() instead.
class DegenerateInputError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Non-finite argument to a numeric function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A lifecycle operation was attempted from a position that does not allow it.
class InvalidTransition : public Error {
 public:
  using Error::Error;
};

/// A checklist item was marked a second time.
class DuplicateError : public InvalidTransition {
 public:
  using InvalidTransition::InvalidTransition;
};

/// A journal could not be folded into a state; `seq()` is the offending event.
class ReplayError : public Error {
 public:
  ReplayError(std::uint64_t seq, const std::string& message)
      : Error("seq " + std::to_string(seq) + ": " + message), seq_(seq) {}

  std::uint64_t seq() const noexcept { return seq_; }

 private:
  std::uint64_t seq_;
};

/// Malformed text input. `line()` is 1-based; 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The on-disk journal is damaged (bad record, torn trailing line, seq gap).
class JournalCorrupt : public ParseError {
 public:
  using ParseError::ParseError;
};

/// A journal system call failed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Another writer holds the project lock.
class LockError : public Error {
 public:
  using Error::Error;
};

}  // namespace kv
