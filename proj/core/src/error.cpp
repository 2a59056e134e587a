#include "flowgen/error.hpp"

namespace flowgen {

std::string_view code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SingularTransform: return "SingularTransform";
    case ErrorCode::EmptyClassSet: return "EmptyClassSet";
    case ErrorCode::ZeroArea: return "ZeroArea";
    case ErrorCode::EmptyPool: return "EmptyPool";
    case ErrorCode::DecodeFailure: return "DecodeFailure";
    case ErrorCode::PlacementFailure: return "PlacementFailure";
    case ErrorCode::NonpositiveFactor: return "NonpositiveFactor";
    case ErrorCode::MissingTexture: return "MissingTexture";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EdgeMismatch: return "EdgeMismatch";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::DimensionOverflow: return "DimensionOverflow";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::SampleMismatch: return "SampleMismatch";
    case ErrorCode::NoFlowFiles: return "NoFlowFiles";
  }
  return "Unknown";
}

}  // namespace flowgen
