#include "dployopt/error.hpp"

namespace dployopt {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::UnknownEngine: return "UnknownEngine";
    case ErrorCode::NonPositiveCores: return "NonPositiveCores";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NegativeLatency: return "NegativeLatency";
    case ErrorCode::EmptyRuns: return "EmptyRuns";
    case ErrorCode::EmptySpace: return "EmptySpace";
    case ErrorCode::MissingEntry: return "MissingEntry";
    case ErrorCode::MissingNormalizer: return "MissingNormalizer";
    case ErrorCode::MissingReference: return "MissingReference";
    case ErrorCode::NoFeasibleDesign: return "NoFeasibleDesign";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(detail), code_(code) {}

void fail(ErrorCode code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace dployopt
