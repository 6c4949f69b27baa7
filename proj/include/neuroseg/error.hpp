#pragma once

#include <stdexcept>
#include <string>

namespace neuroseg {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  MarkerOutsideMask,
  SeedOnBackground,
  UndefinedRCE,
  EmptyGroundTruth,
  CoverageGap,
  BadFormat,
  NotThreeChannel,
  LabelOverflow,
  UnknownColor,
  ParseError,
  OutOfBounds,
  DuplicatePoint,
  MissingPair,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace neuroseg
