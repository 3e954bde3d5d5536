#pragma once

#include <optional>
#include <string>
#include <vector>

#include "alertlens/store/store.hpp"

namespace alertlens {

enum class FacetAttribute {
  kUser,
  kPolicy,
  kResource,
  kResourceType,
  kActivity,
  kEndpoint,
  kApplication,
  kAlertHour,
  kEventCount,
  kAlertTime,  // color only
  kSeverity,   // color only
};

std::string_view to_string(FacetAttribute a);
FacetAttribute parse_facet_attribute(std::string_view s);
bool is_axis_attribute(FacetAttribute a);
bool is_continuous(FacetAttribute a);

// Value of an attribute for one alert; event attributes use the first event.
Json facet_value(const Alert& a, FacetAttribute attr);
std::string facet_key(const Alert& a, FacetAttribute attr);

struct FacetSpec {
  std::string handle;                  // either a handle...
  std::vector<std::string> alert_ids;  // ...or explicit ids
  FacetAttribute x = FacetAttribute::kPolicy;
  FacetAttribute y = FacetAttribute::kUser;
  std::optional<FacetAttribute> color;

  bool operator==(const FacetSpec&) const = default;
};

void to_json(Json& j, const FacetSpec& s);
void from_json(const Json& j, FacetSpec& s);

struct FacetGroup {
  std::string x_value;
  std::string y_value;
  std::vector<std::string> alert_ids;  // time order
  bool operator==(const FacetGroup&) const = default;
};

struct FacetResult {
  FacetAttribute x = FacetAttribute::kPolicy;
  FacetAttribute y = FacetAttribute::kUser;
  std::vector<FacetGroup> groups;  // ordered by (x, y); numeric attributes compare numerically
  std::optional<FacetAttribute> color;
  std::vector<std::pair<std::string, Json>> colors;  // alert id -> raw value
  std::size_t alert_count = 0;
};

void to_json(Json& j, const FacetResult& r);

// Orders two facet keys of the given attribute.
bool facet_key_less(FacetAttribute attr, const std::string& a, const std::string& b);

// Throws Error(kEmptySelection) when nothing visible is selected.
FacetResult facet(const Snapshot& snap, const FacetSpec& spec);

}  // namespace alertlens
