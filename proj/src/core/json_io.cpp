#include "alertlens/core/json_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "alertlens/core/error.hpp"

namespace alertlens {
namespace {

template <typename T>
T parse_as(std::string_view text, const char* what) {
  try {
    return Json::parse(text).get<T>();
  } catch (const Json::exception& ex) {
    throw Error(ErrorCode::kParse, std::string("malformed ") + what + ": " + ex.what());
  }
}

}  // namespace

void to_json(Json& j, const Event& e) {
  j = Json{{"event_id", e.event_id},
           {"user", e.user},
           {"endpoint", e.endpoint},
           {"application", e.application},
           {"resource", e.resource},
           {"resource_type", to_string(e.resource_type)},
           {"activity", to_string(e.activity)},
           {"start_time", format_timestamp(e.start_time)},
           {"end_time", format_timestamp(e.end_time)}};
}

void from_json(const Json& j, Event& e) {
  j.at("event_id").get_to(e.event_id);
  j.at("user").get_to(e.user);
  j.at("endpoint").get_to(e.endpoint);
  j.at("application").get_to(e.application);
  j.at("resource").get_to(e.resource);
  e.resource_type = parse_resource_type(j.at("resource_type").get<std::string>());
  e.activity = parse_activity(j.at("activity").get<std::string>());
  e.start_time = parse_timestamp(j.at("start_time").get<std::string>());
  e.end_time = parse_timestamp(j.at("end_time").get<std::string>());
}

void to_json(Json& j, const PolicyClause& c) {
  j = Json{{"attribute", to_string(c.attribute)}, {"operator", to_string(c.op)}};
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, HourRange>) {
          j["value"] = Json::array({v.from, v.to});
        } else {
          j["value"] = v;
        }
      },
      c.value);
}

void from_json(const Json& j, PolicyClause& c) {
  c.attribute = parse_clause_attribute(j.at("attribute").get<std::string>());
  c.op = parse_clause_operator(j.at("operator").get<std::string>());
  const Json& v = j.at("value");
  if (c.op == ClauseOperator::kHourInRange) {
    if (!v.is_array() || v.size() != 2) throw Error(ErrorCode::kParse, "hour_in_range value must be [from, to]");
    c.value = HourRange{v[0].get<int>(), v[1].get<int>()};
  } else if (v.is_array()) {
    c.value = v.get<std::vector<std::string>>();
  } else {
    c.value = v.get<std::string>();
  }
  validate_clause(c);
}

void to_json(Json& j, const Policy& p) {
  j = Json{{"policy_id", p.policy_id}, {"name", p.name}, {"severity", p.severity}, {"disjuncts", p.disjuncts}};
}

void from_json(const Json& j, Policy& p) {
  j.at("policy_id").get_to(p.policy_id);
  p.name = j.value("name", p.policy_id);
  j.at("severity").get_to(p.severity);
  j.at("disjuncts").get_to(p.disjuncts);
  validate_policy(p);
}

void to_json(Json& j, const Alert& a) {
  j = Json{{"alert_id", a.alert_id},
           {"alert_time", format_timestamp(a.alert_time)},
           {"policy_id", a.policy_id},
           {"severity", a.severity},
           {"events", a.events}};
}

void from_json(const Json& j, Alert& a) {
  j.at("alert_id").get_to(a.alert_id);
  a.alert_time = parse_timestamp(j.at("alert_time").get<std::string>());
  j.at("policy_id").get_to(a.policy_id);
  j.at("severity").get_to(a.severity);
  j.at("events").get_to(a.events);
}

void to_json(Json& j, const TimeRange& r) {
  j = Json{{"start", format_timestamp(r.start)}, {"end", format_timestamp(r.end)}};
}

void from_json(const Json& j, TimeRange& r) {
  r.start = parse_timestamp(j.at("start").get<std::string>());
  r.end = parse_timestamp(j.at("end").get<std::string>());
}

void to_json(Json& j, const ExclusionSet& s) {
  j = Json{{"excluded_ranges", s.excluded_ranges}, {"excluded_users", s.excluded_users}};
}

void from_json(const Json& j, ExclusionSet& s) {
  s.excluded_ranges = j.value("excluded_ranges", std::vector<TimeRange>{});
  s.excluded_users = j.value("excluded_users", std::vector<std::string>{});
}

Alert parse_alert_line(std::string_view line) { return parse_as<Alert>(line, "alert record"); }
Event parse_event_line(std::string_view line) { return parse_as<Event>(line, "event record"); }
std::vector<Policy> parse_policies(std::string_view text) {
  return parse_as<std::vector<Policy>>(text, "policy file");
}
ExclusionSet parse_exclusions(std::string_view text) {
  return normalize(parse_as<ExclusionSet>(text, "exclusion config"));
}

void write_alert_line(std::ostream& out, const Alert& a) { out << Json(a).dump() << '\n'; }
void write_event_line(std::ostream& out, const Event& e) { out << Json(e).dump() << '\n'; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

}  // namespace alertlens
