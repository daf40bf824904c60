#pragma once

#include <stdexcept>
#include <string>

namespace lrl0 {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  geometry,
  coverage,
  non_finite,
  io,
  malformed_header,
  unsupported_maxval,
  truncated_data,
  malformed_data,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::geometry: return "infeasible patch geometry";
    case ErrorCode::coverage: return "coverage violation";
    case ErrorCode::non_finite: return "non-finite value";
    case ErrorCode::io: return "i/o failure";
    case ErrorCode::malformed_header: return "malformed header";
    case ErrorCode::unsupported_maxval: return "unsupported maxval";
    case ErrorCode::truncated_data: return "truncated data";
    case ErrorCode::malformed_data: return "malformed data";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lrl0
