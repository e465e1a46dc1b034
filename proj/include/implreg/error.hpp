#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace implreg {

/// Machine-readable error categories. Every user-facing failure carries one of
/// these; the CLI prints the name verbatim.
enum class ErrorCode {
  ParseError,
  NodeIdGap,
  SelfLoop,
  NonPositiveWeight,
  DisconnectedGraph,
  AlphaOutOfRange,
  DegenerateTrivialSpace,
  SingularFunctionValue,
  NegativeWeight,
  NegativeTime,
  GammaOutOfRange,
  SingularResolvent,
  BadPreferenceVector,
  NegativeEigenvalueFractionalPower,
  ZeroStartVector,
  DomainError,
  RangeError,
  LambdaOutOfRange,
  EtaNonPositive,
  BisectionFailure,
  NonConvergence,
  AlphaTooSmallForFractionalPower,
  AlphaBelowPsdThreshold,
  InvalidArgument,
  IoError,
};

constexpr std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NodeIdGap: return "NodeIdGap";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::DegenerateTrivialSpace: return "DegenerateTrivialSpace";
    case ErrorCode::SingularFunctionValue: return "SingularFunctionValue";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::GammaOutOfRange: return "GammaOutOfRange";
    case ErrorCode::SingularResolvent: return "SingularResolvent";
    case ErrorCode::BadPreferenceVector: return "BadPreferenceVector";
    case ErrorCode::NegativeEigenvalueFractionalPower: return "NegativeEigenvalueFractionalPower";
    case ErrorCode::ZeroStartVector: return "ZeroStartVector";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::LambdaOutOfRange: return "LambdaOutOfRange";
    case ErrorCode::EtaNonPositive: return "EtaNonPositive";
    case ErrorCode::BisectionFailure: return "BisectionFailure";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::AlphaTooSmallForFractionalPower: return "AlphaTooSmallForFractionalPower";
    case ErrorCode::AlphaBelowPsdThreshold: return "AlphaBelowPsdThreshold";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Domain error: bad input or a mathematically inadmissible parameter.
/// Internal invariant violations throw std::logic_error instead.
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

}  // namespace implreg
