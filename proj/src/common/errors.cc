#include "ctelig/common/errors.h"

namespace ctelig {

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

FormatError::FormatError(const std::string& file, std::size_t line,
                         const std::string& message)
    : DataError(file + (line > 0 ? ":" + std::to_string(line) : "") + ": " +
                message),
      line_(line) {}

int exitCodeFor(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config:
      return 2;
    case ErrorKind::Data:
    case ErrorKind::Io:
      return 3;
    case ErrorKind::Budget:
      return 4;
  }
  return 1;
}

const char* toString(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config:
      return "config error";
    case ErrorKind::Data:
      return "data error";
    case ErrorKind::Budget:
      return "scope refusal";
    case ErrorKind::Io:
      return "i/o error";
  }
  return "error";
}

}  // namespace ctelig
