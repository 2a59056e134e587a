#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flowgen {

enum class ErrorCode {
  InvalidArgument,
  SingularTransform,
  EmptyClassSet,
  ZeroArea,
  EmptyPool,
  DecodeFailure,
  PlacementFailure,
  NonpositiveFactor,
  MissingTexture,
  DimensionMismatch,
  EdgeMismatch,
  BadMagic,
  BadHeader,
  TruncatedFile,
  DimensionOverflow,
  IoFailure,
  ConfigError,
  SampleMismatch,
  NoFlowFiles,
};

std::string_view code_name(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-readable code so the
/// CLI can print a single parsable line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace flowgen
