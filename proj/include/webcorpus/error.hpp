#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace webcorpus {

enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kIo,
  kEmptyCountryCode,
  kUnknownRegion,
  kEmptyInput,
  kBackendUnavailable,
  kQuotaExceeded,
  kDuplicateName,
  kEmptyClass,
  kUnlabeledName,
  kEmptyMatrix,
  kEmptyAfterFilter,
};

std::string_view to_string(ErrorCode code);

// Every recoverable failure raised by the library carries one of the codes
// above so callers (and tests) can dispatch on the kind, not the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace webcorpus
