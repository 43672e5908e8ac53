#include "ign/error.hpp"

namespace ign {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularGram: return "SingularGram";
    case ErrorCode::InnerMatrixSingular: return "InnerMatrixSingular";
    case ErrorCode::NotSPD: return "NotSPD";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::BadLabel: return "BadLabel";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InconsistentDimension: return "InconsistentDimension";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace ign
