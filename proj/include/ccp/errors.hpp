#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ccp {

enum class ErrorCode {
  SizeTooSmall,
  OutOfRange,
  NotNormalized,
  IndexOutOfRange,
  RangeError,
  EnumerationTooLarge,
  ParseError,
  TrialCapExceeded,
  BackendMismatch,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SizeTooSmall: return "SizeTooSmall";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::TrialCapExceeded: return "TrialCapExceeded";
    case ErrorCode::BackendMismatch: return "BackendMismatch";
  }
  return "Unknown";
}

// Every library failure surfaces as this exception; code() is stable and
// is what the CLI reports in machine-readable output.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace ccp
