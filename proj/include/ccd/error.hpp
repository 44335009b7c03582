#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ccd {

/// Failure categories raised by the library. The CLI maps them onto exit codes.
enum class ErrorKind {
  DimensionMismatch,
  InvalidArgument,
  SingularPoint,      // |N_H| vanishes: point of the singular set
  DegenerateTangents,
  NonUnitNormal,
  AxisPoint,          // x <= 0 in a rotational formula
  AxisSingularity,    // profile ODE evaluated at the axis
  EnergyDrift,
  NoCriticalPoint,
  NoAdmissibleRadius,
  RootBracketFailure,
  Divergent,
  NonConvergence,
  OpenProfile,
  Io,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::DegenerateTangents: return "DegenerateTangents";
    case ErrorKind::NonUnitNormal: return "NonUnitNormal";
    case ErrorKind::AxisPoint: return "AxisPoint";
    case ErrorKind::AxisSingularity: return "AxisSingularity";
    case ErrorKind::EnergyDrift: return "EnergyDrift";
    case ErrorKind::NoCriticalPoint: return "NoCriticalPoint";
    case ErrorKind::NoAdmissibleRadius: return "NoAdmissibleRadius";
    case ErrorKind::RootBracketFailure: return "RootBracketFailure";
    case ErrorKind::Divergent: return "Divergent";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::OpenProfile: return "OpenProfile";
    case ErrorKind::Io: return "Io";
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

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace ccd
