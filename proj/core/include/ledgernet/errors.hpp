#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ledgernet {

// Root of every error the library throws on purpose. Anything else escaping
// the public API is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AddressError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ExportError : public IoError {
 public:
  using IoError::IoError;
};

/// Malformed input file. `line` is 1-based for line-oriented formats and 0
/// when unknown; `offset` is a byte offset for JSON syntax errors.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t offset = 0)
      : Error(what), line_(line), offset_(offset) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t line_;
  std::size_t offset_;
};

class EmptyRange : public Error {
 public:
  using Error::Error;
};

class CheckpointError : public Error {
 public:
  using Error::Error;
};

/// A block provider failed. Retryable errors are retried by the fetch loop;
/// the rest propagate immediately. `attempts` is filled in once the retry
/// loop gives up.
class ProviderError : public Error {
 public:
  ProviderError(const std::string& what, bool retryable, unsigned attempts = 0)
      : Error(what), retryable_(retryable), attempts_(attempts) {}

  bool retryable() const noexcept { return retryable_; }
  unsigned attempts() const noexcept { return attempts_; }

 private:
  bool retryable_;
  unsigned attempts_;
};

/// Cooperative cancellation reached a blocking point.
class Interrupted : public Error {
 public:
  Interrupted() : Error("interrupted") {}
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

class SpecError : public Error {
 public:
  using Error::Error;
};

}  // namespace ledgernet
