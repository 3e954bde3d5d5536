#include "alertlens/core/resource.hpp"

#include <algorithm>
#include <cctype>

#include "alertlens/core/error.hpp"

namespace alertlens {
namespace {

bool is_hex(char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; }

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

// Length 36 match of 8-4-4-4-12 hex groups starting at pos, not embedded in
// a longer hex run.
bool guid_at(std::string_view s, std::size_t pos) {
  static constexpr int kGroups[] = {8, 4, 4, 4, 12};
  if (pos + 36 > s.size()) return false;
  if (pos > 0 && is_hex(s[pos - 1])) return false;
  std::size_t i = pos;
  for (int g = 0; g < 5; ++g) {
    for (int k = 0; k < kGroups[g]; ++k, ++i) {
      if (!is_hex(s[i])) return false;
    }
    if (g < 4) {
      if (s[i] != '-') return false;
      ++i;
    }
  }
  return i == s.size() || !is_hex(s[i]);
}

std::vector<std::string> find_guids(std::string_view s) {
  std::vector<std::string> out;
  for (std::size_t pos = 0; pos + 36 <= s.size();) {
    if (guid_at(s, pos)) {
      std::string g(s.substr(pos, 36));
      std::transform(g.begin(), g.end(), g.begin(), lower);
      out.push_back(std::move(g));
      pos += 36;
    } else {
      ++pos;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool has_dot_extension(std::string_view s) {
  auto dot = s.rfind('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == s.size()) return false;
  return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(dot) + 1, s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; });
}

}  // namespace

std::string_view to_string(ResourceKind k) {
  switch (k) {
    case ResourceKind::kFilepath: return "filepath";
    case ResourceKind::kUsbDescriptor: return "usb_descriptor";
    case ResourceKind::kOther: return "other";
  }
  return "other";
}

ResourceRef parse_resource(std::string_view raw) {
  if (raw.empty()) throw Error(ErrorCode::kInvalidResource, "resource string is empty");

  ResourceRef ref;
  ref.raw = std::string(raw);
  ref.guids = find_guids(raw);
  if (!ref.guids.empty()) {
    ref.kind = ResourceKind::kUsbDescriptor;
    return ref;
  }
  auto sep = raw.find_last_of("/\\");
  if (sep != std::string_view::npos || has_dot_extension(raw)) {
    std::string_view tail = sep == std::string_view::npos ? raw : raw.substr(sep + 1);
    if (!tail.empty()) {
      ref.kind = ResourceKind::kFilepath;
      ref.filename_segment.assign(tail.begin(), tail.end());
      std::transform(ref.filename_segment.begin(), ref.filename_segment.end(), ref.filename_segment.begin(), lower);
      return ref;
    }
  }
  // a trailing separator leaves no filename; treat as opaque
  ref.kind = ResourceKind::kOther;
  return ref;
}

bool resources_match(const ResourceRef& a, const ResourceRef& b, bool permissive) {
  if (a.raw == b.raw) return true;
  if (!permissive || a.kind != b.kind) return false;
  switch (a.kind) {
    case ResourceKind::kFilepath:
      return a.filename_segment == b.filename_segment;
    case ResourceKind::kUsbDescriptor: {
      // both lists are sorted
      auto i = a.guids.begin();
      auto j = b.guids.begin();
      while (i != a.guids.end() && j != b.guids.end()) {
        if (*i == *j) return true;
        if (*i < *j) ++i; else ++j;
      }
      return false;
    }
    case ResourceKind::kOther:
      return false;
  }
  return false;
}

}  // namespace alertlens
