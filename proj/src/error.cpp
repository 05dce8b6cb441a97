#include "texturedge/error.hpp"

namespace texturedge {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedData: return "TruncatedData";
    case ErrorCode::MaxvalUnsupported: return "MaxvalUnsupported";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::CenterOutOfBounds: return "CenterOutOfBounds";
    case ErrorCode::InvalidTimeStep: return "InvalidTimeStep";
    case ErrorCode::TilesTooMany: return "TilesTooMany";
    case ErrorCode::LevelsOutOfRange: return "LevelsOutOfRange";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::WindowTooLarge: return "WindowTooLarge";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegenerateMap: return "DegenerateMap";
    case ErrorCode::NoPositives: return "NoPositives";
    case ErrorCode::NoNegatives: return "NoNegatives";
    case ErrorCode::NoGroundTruth: return "NoGroundTruth";
    case ErrorCode::MissingImage: return "MissingImage";
    case ErrorCode::MissingRecord: return "MissingRecord";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

}  // namespace texturedge
