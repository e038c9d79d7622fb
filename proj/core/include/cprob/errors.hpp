#ifndef CPROB_ERRORS_HPP
#define CPROB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cprob {

enum class ErrorCode {
  DuplicateLabel,
  EmptySpace,
  UnknownLabel,
  SpaceMismatch,
  DimensionMismatch,
  StepMismatch,
  TooLarge,
  DivisorZero,
  DegenerateDenominator,
  BadPartition,
  ParameterRange,
  SingularWeight,
  GridTooCoarse,
  SingularMoments,
  BoundaryContamination,
  DegenerateRow,
  RowSumViolation,
  UnknownParameter,
  InvalidArgument,
  Io,
};

const char* to_string(ErrorCode code);

/// Engine-wide exception type. The code identifies the contract that was
/// violated; the message carries the specifics (row index, offending sum, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::EmptySpace: return "EmptySpace";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::StepMismatch: return "StepMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::DivisorZero: return "DivisorZero";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::BadPartition: return "BadPartition";
    case ErrorCode::ParameterRange: return "ParameterRange";
    case ErrorCode::SingularWeight: return "SingularWeight";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::SingularMoments: return "SingularMoments";
    case ErrorCode::BoundaryContamination: return "BoundaryContamination";
    case ErrorCode::DegenerateRow: return "DegenerateRow";
    case ErrorCode::RowSumViolation: return "RowSumViolation";
    case ErrorCode::UnknownParameter: return "UnknownParameter";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace cprob

#endif  // CPROB_ERRORS_HPP
