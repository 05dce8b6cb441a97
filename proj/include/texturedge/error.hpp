#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace texturedge {

enum class ErrorCode {
  // imgio
  BadMagic,
  TruncatedData,
  MaxvalUnsupported,
  MalformedHeader,
  MalformedLine,
  CenterOutOfBounds,
  // enhance
  InvalidTimeStep,
  TilesTooMany,
  // texture
  LevelsOutOfRange,
  EmptyRegion,
  WindowTooLarge,
  DimensionMismatch,
  // segment
  DegenerateMap,
  // evalmetrics
  NoPositives,
  NoNegatives,
  // pipeline
  NoGroundTruth,
  MissingImage,
  MissingRecord,
  InvalidConfig,
  Io,
  // anything that should be impossible if the library is correct
  InvariantViolation,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Library-wide exception. Every failure carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace texturedge
