#include "alertlens/store/facet.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <map>

#include "alertlens/core/error.hpp"

namespace alertlens {
namespace {

constexpr std::array<std::pair<FacetAttribute, std::string_view>, 11> kNames{{
    {FacetAttribute::kUser, "user"},
    {FacetAttribute::kPolicy, "policy"},
    {FacetAttribute::kResource, "resource"},
    {FacetAttribute::kResourceType, "resource_type"},
    {FacetAttribute::kActivity, "activity"},
    {FacetAttribute::kEndpoint, "endpoint"},
    {FacetAttribute::kApplication, "application"},
    {FacetAttribute::kAlertHour, "alert_hour"},
    {FacetAttribute::kEventCount, "event_count"},
    {FacetAttribute::kAlertTime, "alert_time"},
    {FacetAttribute::kSeverity, "severity"},
}};

bool is_numeric(FacetAttribute a) {
  return a == FacetAttribute::kAlertHour || a == FacetAttribute::kEventCount || a == FacetAttribute::kSeverity;
}

long long to_number(const std::string& s) {
  long long v = 0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

const Event& first_event(const Alert& a) {
  if (a.events.empty()) throw Error(ErrorCode::kSpec, "alert " + a.alert_id + " has no events");
  return a.events.front();
}

}  // namespace

std::string_view to_string(FacetAttribute a) {
  for (const auto& [attr, name] : kNames) {
    if (attr == a) return name;
  }
  return "?";
}

FacetAttribute parse_facet_attribute(std::string_view s) {
  for (const auto& [attr, name] : kNames) {
    if (name == s) return attr;
  }
  throw Error(ErrorCode::kSpec, "unknown facet attribute '" + std::string(s) + "'");
}

bool is_axis_attribute(FacetAttribute a) { return a != FacetAttribute::kAlertTime && a != FacetAttribute::kSeverity; }

bool is_continuous(FacetAttribute a) {
  return a == FacetAttribute::kAlertTime || a == FacetAttribute::kAlertHour || a == FacetAttribute::kEventCount ||
         a == FacetAttribute::kSeverity;
}

std::string facet_key(const Alert& a, FacetAttribute attr) {
  switch (attr) {
    case FacetAttribute::kUser: return first_event(a).user;
    case FacetAttribute::kPolicy: return a.policy_id;
    case FacetAttribute::kResource: return first_event(a).resource;
    case FacetAttribute::kResourceType: return std::string(to_string(first_event(a).resource_type));
    case FacetAttribute::kActivity: return std::string(to_string(first_event(a).activity));
    case FacetAttribute::kEndpoint: return first_event(a).endpoint;
    case FacetAttribute::kApplication: return first_event(a).application;
    case FacetAttribute::kAlertHour: return std::to_string(hour_of(a.alert_time));
    case FacetAttribute::kEventCount: return std::to_string(a.events.size());
    case FacetAttribute::kAlertTime: return format_timestamp(a.alert_time);
    case FacetAttribute::kSeverity: return std::to_string(a.severity);
  }
  return {};
}

Json facet_value(const Alert& a, FacetAttribute attr) {
  switch (attr) {
    case FacetAttribute::kAlertHour: return hour_of(a.alert_time);
    case FacetAttribute::kEventCount: return a.events.size();
    case FacetAttribute::kSeverity: return a.severity;
    case FacetAttribute::kAlertTime: return a.alert_time;
    default: return facet_key(a, attr);
  }
}

bool facet_key_less(FacetAttribute attr, const std::string& a, const std::string& b) {
  if (is_numeric(attr)) return to_number(a) < to_number(b);
  return a < b;
}

FacetResult facet(const Snapshot& snap, const FacetSpec& spec) {
  if (spec.x == spec.y) throw Error(ErrorCode::kSpec, "facet x and y attributes must differ");
  if (!is_axis_attribute(spec.x) || !is_axis_attribute(spec.y)) {
    throw Error(ErrorCode::kSpec, "alert_time and severity are color attributes only");
  }
  const AlertTable& t = snap.t();
  std::vector<AlertIndex> picked;
  if (!spec.handle.empty()) {
    picked = snap.resolve(decode_handle(spec.handle, snap.exclusion_fingerprint));
  } else {
    for (const auto& id : spec.alert_ids) {
      auto it = t.index_by_id.find(id);
      if (it == t.index_by_id.end()) throw Error(ErrorCode::kHandle, "unknown alert id " + id);
      if (snap.visible(it->second)) picked.push_back(it->second);
    }
    std::sort(picked.begin(), picked.end());
    picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
  }
  if (picked.empty()) throw Error(ErrorCode::kEmptySelection, "the selection contains no visible alerts");

  auto less = [&](const std::pair<std::string, std::string>& a, const std::pair<std::string, std::string>& b) {
    if (a.first != b.first) return facet_key_less(spec.x, a.first, b.first);
    if (a.second != b.second) return facet_key_less(spec.y, a.second, b.second);
    return false;
  };
  std::map<std::pair<std::string, std::string>, std::vector<std::string>, decltype(less)> groups(less);
  FacetResult result;
  result.x = spec.x;
  result.y = spec.y;
  result.color = spec.color;
  result.alert_count = picked.size();
  for (AlertIndex i : picked) {
    const Alert& a = t.alerts[i];
    groups[{facet_key(a, spec.x), facet_key(a, spec.y)}].push_back(a.alert_id);
    if (spec.color) result.colors.emplace_back(a.alert_id, facet_value(a, *spec.color));
  }
  for (auto& [key, ids] : groups) result.groups.push_back({key.first, key.second, std::move(ids)});
  return result;
}

void to_json(Json& j, const FacetSpec& s) {
  j = Json{{"x", to_string(s.x)}, {"y", to_string(s.y)}};
  if (!s.handle.empty()) j["handle"] = s.handle;
  if (!s.alert_ids.empty()) j["alert_ids"] = s.alert_ids;
  if (s.color) j["color"] = to_string(*s.color);
}

void from_json(const Json& j, FacetSpec& s) {
  s = FacetSpec{};
  s.x = parse_facet_attribute(j.at("x").get<std::string>());
  s.y = parse_facet_attribute(j.at("y").get<std::string>());
  if (j.contains("handle")) s.handle = j.at("handle").get<std::string>();
  if (j.contains("alert_ids")) s.alert_ids = j.at("alert_ids").get<std::vector<std::string>>();
  if (j.contains("color") && !j.at("color").is_null()) s.color = parse_facet_attribute(j.at("color").get<std::string>());
}

void to_json(Json& j, const FacetResult& r) {
  Json groups = Json::array();
  for (const auto& g : r.groups) {
    groups.push_back({{"x_value", g.x_value}, {"y_value", g.y_value}, {"alert_ids", g.alert_ids}});
  }
  j = Json{{"x", to_string(r.x)}, {"y", to_string(r.y)}, {"groups", groups}, {"alert_count", r.alert_count}};
  if (r.color) {
    Json values = Json::object();
    for (const auto& [id, v] : r.colors) values[id] = v;
    j["color"] = Json{{"attribute", to_string(*r.color)},
                      {"kind", is_continuous(*r.color) ? "continuous" : "categorical"},
                      {"values", values}};
  }
}

}  // namespace alertlens
