#pragma once

#include <stdexcept>
#include <string>

namespace medpers {

enum class ErrorKind {
  NegativeEntry,
  ColumnSumMismatch,
  TooFewRealizations,
  DimensionMismatch,
  ZeroProbabilitySignal,
  PriorOutsideSupport,
  BarycenterMismatch,
  InvalidDistribution,
  SingularGarbling,
  NotSigmaPlausible,
  DegeneratePrior,
  EmptyDomain,
  InvalidUtility,
  Schema,
  Tolerance,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::ColumnSumMismatch: return "ColumnSumMismatch";
    case ErrorKind::TooFewRealizations: return "TooFewRealizations";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroProbabilitySignal: return "ZeroProbabilitySignal";
    case ErrorKind::PriorOutsideSupport: return "PriorOutsideSupport";
    case ErrorKind::BarycenterMismatch: return "BarycenterMismatch";
    case ErrorKind::InvalidDistribution: return "InvalidDistribution";
    case ErrorKind::SingularGarbling: return "SingularGarbling";
    case ErrorKind::NotSigmaPlausible: return "NotSigmaPlausible";
    case ErrorKind::DegeneratePrior: return "DegeneratePrior";
    case ErrorKind::EmptyDomain: return "EmptyDomain";
    case ErrorKind::InvalidUtility: return "InvalidUtility";
    case ErrorKind::Schema: return "Schema";
    case ErrorKind::Tolerance: return "Tolerance";
  }
  return "Unknown";
}

}  // namespace medpers
