#pragma once

#include <stdexcept>
#include <string>

namespace edepth {

enum class ErrorCode {
  InvalidArgument,
  InvalidGrid,
  DimensionMismatch,
  GridMismatch,
  ZeroLength,
  Antipodal,
  NotTangent,
  NotInvertible,
  Factorization,
  Parse,
};

/// Single exception type for the library; `code()` lets callers branch on the
/// failure class without parsing messages.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace edepth
