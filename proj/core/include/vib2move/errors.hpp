#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vib2move {

enum class ErrorCode {
  kInvalidArgument,
  kZeroWrench,
  kObjectDropped,
  kStageTimeout,
  kOrientationLimit,
  kParse,
  kIo,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can dispatch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vib2move
