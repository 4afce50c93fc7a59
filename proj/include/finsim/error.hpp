#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace finsim {

enum class ErrorCode {
  InvalidArgument,
  DegenerateInput,
  GridMismatch,
  UnknownPreset,
  PatchDoesNotFit,
  NonManifoldInput,
  OrientationConflict,
  CardinalityMismatch,
  NonPositiveStretch,
  IndenterSwallowsMesh,
  SceneInvalid,
  ImageNaN,
  OutOfBounds,
  RegionMaskMismatch,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Validation errors are the caller's fault (bad spec, bad file); everything
/// else is a runtime failure.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace finsim
