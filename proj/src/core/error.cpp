#include "alertlens/core/error.hpp"

#include "alertlens/core/hash.hpp"

namespace alertlens {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidResource: return "invalid-resource";
    case ErrorCode::kEmptySelection: return "empty-selection";
    case ErrorCode::kOrdering: return "ordering";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kSpec: return "spec";
    case ErrorCode::kHandle: return "handle";
    case ErrorCode::kStaleHandle: return "stale-handle";
    case ErrorCode::kRange: return "range";
    case ErrorCode::kUnknownNode: return "unknown-node";
    case ErrorCode::kUnknownEdge: return "unknown-edge";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

std::string to_hex(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[v & 0xf];
    v >>= 4;
  }
  return out;
}

}  // namespace alertlens
