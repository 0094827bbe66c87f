#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lqcp {

enum class ErrorCode {
  // datamodel / ingestion
  Empty,
  NonRectangular,
  NonFiniteEntry,
  InvalidOrder,
  InvalidInterval,
  Io,
  Parse,
  // ustat / sntest
  OrderExceedsQ,
  InvalidSplit,
  SizeGuard,
  IntervalTooShort,
  DegenerateNormalizer,
  // nulldist
  BudgetExceeded,
  EmptyTable,
  TableMismatch,
  // adaptive
  MissingPValue,
  OutOfRange,
  // estimate
  NoAdmissibleInterval,
  MissingCalibration,
  InvalidConfig,
  // evalmetrics
  LengthMismatch,
  EmptyList,
  // simgen
  InvalidCovariance,
  DimensionMismatch,
  BadLocation,
  MeanOutOfRange,
  NotSymmetric,
  NonZeroDiagonal,
  // cli
  UnknownScenario,
};

std::string_view to_string(ErrorCode code) noexcept;

/// The single exception type thrown by the library; `code()` identifies the
/// failure class so callers can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lqcp
