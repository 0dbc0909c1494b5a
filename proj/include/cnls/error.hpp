#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cnls {

enum class ErrorCode {
  InvalidArgument,
  InvalidExponent,
  InvalidNonlinearity,
  InvalidProfile,
  LengthMismatch,
  GridMismatch,
  NonpositiveDilation,
  NoProjection,
  ZeroState,
  NonpositiveAmplitude,
  Blowup,
  BracketFailure,
  NoConvergence,
  InfeasibleStart,
  NegativeBeta,
  CertificationFailure,
  InvalidBracket,
  ConfigError,
  ParseError,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::InvalidNonlinearity: return "InvalidNonlinearity";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NonpositiveDilation: return "NonpositiveDilation";
    case ErrorCode::NoProjection: return "NoProjection";
    case ErrorCode::ZeroState: return "ZeroState";
    case ErrorCode::NonpositiveAmplitude: return "NonpositiveAmplitude";
    case ErrorCode::Blowup: return "Blowup";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InfeasibleStart: return "InfeasibleStart";
    case ErrorCode::NegativeBeta: return "NegativeBeta";
    case ErrorCode::CertificationFailure: return "CertificationFailure";
    case ErrorCode::InvalidBracket: return "InvalidBracket";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cnls
