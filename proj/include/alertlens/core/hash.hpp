#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace alertlens {

// 64-bit FNV-1a. Used for content-addressed ids, not for security.
constexpr std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string to_hex(std::uint64_t v);

}  // namespace alertlens
