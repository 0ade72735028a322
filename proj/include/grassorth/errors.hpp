#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace grassorth {

enum class ErrorCode {
  DimensionMismatch,
  NonHermitian,
  RankDeficient,
  NotInChart,
  ZeroVector,
  NotNull,
  NotExactMode,
  EmptyIntersection,
  DegenerateComplement,
  SamplerExhausted,
  InvalidArgument,
  ParseError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NotInChart: return "NotInChart";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotNull: return "NotNull";
    case ErrorCode::NotExactMode: return "NotExactMode";
    case ErrorCode::EmptyIntersection: return "EmptyIntersection";
    case ErrorCode::DegenerateComplement: return "DegenerateComplement";
    case ErrorCode::SamplerExhausted: return "SamplerExhausted";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace grassorth
