#pragma once

#include <stdexcept>
#include <string>

namespace dployopt {

enum class ErrorCode {
  MissingField,
  UnknownEngine,
  NonPositiveCores,
  MalformedRow,
  NegativeLatency,
  EmptyRuns,
  EmptySpace,
  MissingEntry,
  MissingNormalizer,
  MissingReference,
  NoFeasibleDesign,
  InvalidArgument,
  IoError,
};

const char* to_string(ErrorCode code);

/// All library failures surface as this exception; `code()` is stable and
/// machine-mappable (the CLI greps on it for exit codes and error lines).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& detail);

}  // namespace dployopt
