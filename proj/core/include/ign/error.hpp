#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ign {

enum class ErrorCode {
  SingularGram,
  InnerMatrixSingular,
  NotSPD,
  DimensionMismatch,
  NonFinite,
  ParamOutOfRange,
  EmptyDataset,
  BadLabel,
  ParseError,
  InconsistentDimension,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace ign
