#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bomca {

/// Failure categories surfaced by the engine.
enum class ErrorKind {
  InvalidArgument,
  OrderMismatch,
  PoleProximity,
  StepSizeUnderflow,
  MaxStepsExceeded,
  Overflow,
  NoConvergence,
  LeftRegion,
  DegenerateJacobian,
  GridMismatch,
  EmptyRegion,
  NyquistViolation,
  EdgeContamination,
  SplitPointContaminated,
  Config,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::OrderMismatch: return "OrderMismatch";
    case ErrorKind::PoleProximity: return "PoleProximity";
    case ErrorKind::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorKind::MaxStepsExceeded: return "MaxStepsExceeded";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::LeftRegion: return "LeftRegion";
    case ErrorKind::DegenerateJacobian: return "DegenerateJacobian";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::EmptyRegion: return "EmptyRegion";
    case ErrorKind::NyquistViolation: return "NyquistViolation";
    case ErrorKind::EdgeContamination: return "EdgeContamination";
    case ErrorKind::SplitPointContaminated: return "SplitPointContaminated";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bomca
