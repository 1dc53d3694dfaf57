#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kazlab {

enum class ErrorCode {
  invalid_argument,
  domain_mismatch,
  horizon_exceeded,
  resolution,
  not_probability,
  internal_consistency,
  ambiguity,
  dimension_overflow,
  support,
  not_found,
  schema,
  io,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "INVALID_ARGUMENT";
    case ErrorCode::domain_mismatch: return "DOMAIN_MISMATCH";
    case ErrorCode::horizon_exceeded: return "HORIZON_EXCEEDED";
    case ErrorCode::resolution: return "RESOLUTION";
    case ErrorCode::not_probability: return "NOT_PROBABILITY";
    case ErrorCode::internal_consistency: return "INTERNAL_CONSISTENCY";
    case ErrorCode::ambiguity: return "AMBIGUITY";
    case ErrorCode::dimension_overflow: return "DIMENSION_OVERFLOW";
    case ErrorCode::support: return "SUPPORT";
    case ErrorCode::not_found: return "NOT_FOUND";
    case ErrorCode::schema: return "SCHEMA";
    case ErrorCode::io: return "IO";
  }
  return "UNKNOWN";
}

// Every error raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace kazlab
