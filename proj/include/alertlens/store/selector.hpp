#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "alertlens/core/json_io.hpp"

namespace alertlens {

// Declarative description of an alert set. Empty lists mean "any".
struct Selector {
  TimeRange range;
  std::vector<std::string> users;
  std::vector<std::string> policies;
  std::optional<int> hour;
  // Alert matches when any of its resources matches any listed resource.
  std::vector<std::string> resources;
  bool permissive = false;

  bool operator==(const Selector&) const = default;
};

// Sorts and dedupes the list fields so equal selections encode equally.
Selector canonical(Selector s);

void to_json(Json& j, const Selector& s);
void from_json(const Json& j, Selector& s);

// Handles are self-describing: "h1.<base64url selector>.<check>", where the
// check binds the selector to the exclusion fingerprint it was issued under.
std::string encode_handle(const Selector& s, std::string_view exclusion_fingerprint);

// Throws Error(kHandle) when undecodable, Error(kStaleHandle) when issued
// under a different exclusion set.
Selector decode_handle(std::string_view handle, std::string_view exclusion_fingerprint);

std::string base64url_encode(std::string_view bytes);
std::string base64url_decode(std::string_view text);

}  // namespace alertlens
