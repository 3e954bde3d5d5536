#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace alertlens {

enum class ResourceKind { kFilepath, kUsbDescriptor, kOther };

std::string_view to_string(ResourceKind k);

struct ResourceRef {
  ResourceKind kind = ResourceKind::kOther;
  std::string raw;
  std::string filename_segment;  // lower-cased, filepath kind only
  std::vector<std::string> guids;  // lower-cased, sorted, unique; usb kind only

  bool operator==(const ResourceRef&) const = default;
};

// Classifies a raw resource string. GUIDs (8-4-4-4-12 hex, optionally
// brace-wrapped) win over path separators. Throws Error(kInvalidResource)
// on an empty string.
ResourceRef parse_resource(std::string_view raw);

// Exact raw equality unless permissive; permissive compares filename segments
// of two filepaths or GUID sets of two USB descriptors.
bool resources_match(const ResourceRef& a, const ResourceRef& b, bool permissive);

}  // namespace alertlens
