#pragma once

#include <stdexcept>
#include <string>

namespace sfmreg {

enum class ErrorCode {
  kMissingFile,
  kMalformedLine,
  kDanglingReference,
  kEmptyReconstruction,
  kIoFailure,
  kDegenerateConfiguration,
  kDegenerateCloud,
  kTooFewPoints,
  kMissingTrack,
  kMissingNormals,
  kDimensionMismatch,
  kRowCountMismatch,
  kNoSurvivingPairs,
  kNonFiniteCost,
  kInsufficientCorrespondences,
  kNoModelFound,
  kEmptyIndexSet,
  kEmptyPartial,
  kTooFewPartials,
  kNotARotation,
  kEmptyList,
  kMissingGroundTruth,
  kMissingResult,
  kNonFinitePoint,
  kKTooLarge,
  kEmptyCloud,
  kInvalidArgument,
};

const char* error_code_name(ErrorCode code);

/// Exception type for every recoverable failure in the library. The code
/// identifies the failure category; the message carries context (file,
/// line number, offending id, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sfmreg
