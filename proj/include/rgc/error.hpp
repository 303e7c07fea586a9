#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rgc {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kDuplicateEdgeConflict,
  kIsolatedNode,
  kDisconnected,
  kNoConvergence,
  kPTooLarge,
  kGammaOutOfRange,
  kIncompleteBasis,
  kOutOfRange,
  kDisconnectedAfterRetries,
  kCountTooLarge,
  kEmptyEvaluationSet,
  kAllGridPointsFailed,
  kIo,
  kParse,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library. The code is stable and is what the CLI
// maps to exit statuses; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when a graph splits into several components. Components are listed
// by ascending smallest member; members are sorted.
class DisconnectedError : public Error {
 public:
  explicit DisconnectedError(std::vector<std::vector<std::ptrdiff_t>> components);

  const std::vector<std::vector<std::ptrdiff_t>>& components() const noexcept {
    return components_;
  }

 private:
  std::vector<std::vector<std::ptrdiff_t>> components_;
};

}  // namespace rgc
