#pragma once

#include <stdexcept>
#include <string>

namespace pidkit {

/// Failure categories. The numeric values are mirrored by the C API status
/// codes in pidkit.h, so do not reorder.
enum class ErrorCode : int {
  InvalidArgument = 1,
  Validity = 2,
  Alphabet = 3,
  Parse = 4,
  DegenerateInput = 5,
  NotPositiveDefinite = 6,
  Unsupported = 7,
  Estimation = 8,
  Io = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pidkit
