#include "finsim/error.hpp"

namespace finsim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::PatchDoesNotFit: return "PatchDoesNotFit";
    case ErrorCode::NonManifoldInput: return "NonManifoldInput";
    case ErrorCode::OrientationConflict: return "OrientationConflict";
    case ErrorCode::CardinalityMismatch: return "CardinalityMismatch";
    case ErrorCode::NonPositiveStretch: return "NonPositiveStretch";
    case ErrorCode::IndenterSwallowsMesh: return "IndenterSwallowsMesh";
    case ErrorCode::SceneInvalid: return "SceneInvalid";
    case ErrorCode::ImageNaN: return "ImageNaN";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::RegionMaskMismatch: return "RegionMaskMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError:
    case ErrorCode::ImageNaN:
      return false;
    default:
      return true;
  }
}

}  // namespace finsim
