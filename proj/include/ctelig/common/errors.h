#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ctelig {

// Error categories map one-to-one onto CLI exit codes.
enum class ErrorKind {
  Config,  // bad configuration or flags
  Data,    // malformed or missing input data
  Budget,  // request exceeds a documented scope limit
  Io,      // filesystem failures
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error(ErrorKind::Config, message) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& message)
      : Error(ErrorKind::Data, message) {}
};

class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& message)
      : Error(ErrorKind::Budget, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message)
      : Error(ErrorKind::Io, message) {}
};

// A text file that does not follow its declared format. Line numbers are
// 1-based; 0 means the whole file.
class FormatError : public DataError {
 public:
  FormatError(const std::string& file, std::size_t line,
              const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

int exitCodeFor(ErrorKind kind) noexcept;
const char* toString(ErrorKind kind) noexcept;

}  // namespace ctelig
