#include "rgc/error.hpp"

#include <sstream>

namespace rgc {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kDuplicateEdgeConflict: return "DuplicateEdgeConflict";
    case ErrorCode::kIsolatedNode: return "IsolatedNode";
    case ErrorCode::kDisconnected: return "Disconnected";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kPTooLarge: return "PTooLarge";
    case ErrorCode::kGammaOutOfRange: return "GammaOutOfRange";
    case ErrorCode::kIncompleteBasis: return "IncompleteBasis";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kDisconnectedAfterRetries: return "DisconnectedAfterRetries";
    case ErrorCode::kCountTooLarge: return "CountTooLarge";
    case ErrorCode::kEmptyEvaluationSet: return "EmptyEvaluationSet";
    case ErrorCode::kAllGridPointsFailed: return "AllGridPointsFailed";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kParse: return "Parse";
  }
  return "Unknown";
}

namespace {

std::string describe_components(
    const std::vector<std::vector<std::ptrdiff_t>>& components) {
  std::ostringstream os;
  os << components.size() << " components, sizes [";
  for (std::size_t c = 0; c < components.size(); ++c) {
    os << (c ? ", " : "") << components[c].size();
  }
  os << "]";
  return os.str();
}

}  // namespace

DisconnectedError::DisconnectedError(
    std::vector<std::vector<std::ptrdiff_t>> components)
    : Error(ErrorCode::kDisconnected, describe_components(components)),
      components_(std::move(components)) {}

}  // namespace rgc
