#include "sfmreg/error.hpp"

namespace sfmreg {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kDanglingReference: return "DanglingReference";
    case ErrorCode::kEmptyReconstruction: return "EmptyReconstruction";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kDegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::kDegenerateCloud: return "DegenerateCloud";
    case ErrorCode::kTooFewPoints: return "TooFewPoints";
    case ErrorCode::kMissingTrack: return "MissingTrack";
    case ErrorCode::kMissingNormals: return "MissingNormals";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kRowCountMismatch: return "RowCountMismatch";
    case ErrorCode::kNoSurvivingPairs: return "NoSurvivingPairs";
    case ErrorCode::kNonFiniteCost: return "NonFiniteCost";
    case ErrorCode::kInsufficientCorrespondences:
      return "InsufficientCorrespondences";
    case ErrorCode::kNoModelFound: return "NoModelFound";
    case ErrorCode::kEmptyIndexSet: return "EmptyIndexSet";
    case ErrorCode::kEmptyPartial: return "EmptyPartial";
    case ErrorCode::kTooFewPartials: return "TooFewPartials";
    case ErrorCode::kNotARotation: return "NotARotation";
    case ErrorCode::kEmptyList: return "EmptyList";
    case ErrorCode::kMissingGroundTruth: return "MissingGroundTruth";
    case ErrorCode::kMissingResult: return "MissingResult";
    case ErrorCode::kNonFinitePoint: return "NonFinitePoint";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kEmptyCloud: return "EmptyCloud";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace sfmreg
