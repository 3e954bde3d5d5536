#pragma once

#include <stdexcept>
#include <string>

namespace alertlens {

// Machine-readable error codes shared by the library, the CLI and the HTTP layer.
enum class ErrorCode {
  kInvalidResource,
  kEmptySelection,
  kOrdering,
  kConfig,
  kSpec,
  kHandle,
  kStaleHandle,
  kRange,
  kUnknownNode,
  kUnknownEdge,
  kParse,
  kIo,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace alertlens
