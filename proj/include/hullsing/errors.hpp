#pragma once

#include <stdexcept>
#include <string>

namespace hullsing {

enum class ErrorCode {
  NotPositiveDefinite,
  DimensionMismatch,
  AlphaOutOfRange,
  NonConvergence,
  ParamOutOfRange,
  EmptyBody,
  InsufficientSamples,
  GridOutOfDomain,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorCode::EmptyBody: return "EmptyBody";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::GridOutOfDomain: return "GridOutOfDomain";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace hullsing
