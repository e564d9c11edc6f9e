#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace contact {

enum class ErrorKind {
  ModelSingularity,
  SubflowBlowup,
  DegenerateDenominator,
  ActionSolveFailure,
  DegenerateForm,
  NoConvergence,
  ReferenceUnavailable,
  InsufficientSamples,
  UnsupportedRegime,
  InvalidArgument,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ModelSingularity: return "ModelSingularity";
    case ErrorKind::SubflowBlowup: return "SubflowBlowup";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::ActionSolveFailure: return "ActionSolveFailure";
    case ErrorKind::DegenerateForm: return "DegenerateForm";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::ReferenceUnavailable: return "ReferenceUnavailable";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::UnsupportedRegime: return "UnsupportedRegime";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// Every failure raised by the library carries a kind so that drivers can turn
// it into a trajectory status instead of a crash.
class ContactError : public std::runtime_error {
 public:
  ContactError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace contact
