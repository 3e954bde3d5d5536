#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "alertlens/core/model.hpp"
#include "json.hpp"

namespace alertlens {

using Json = nlohmann::json;

// Wire formats. Timestamps travel as ISO-8601 UTC strings.
void to_json(Json& j, const Event& e);
void from_json(const Json& j, Event& e);
void to_json(Json& j, const PolicyClause& c);
void from_json(const Json& j, PolicyClause& c);
void to_json(Json& j, const Policy& p);
void from_json(const Json& j, Policy& p);
void to_json(Json& j, const Alert& a);
void from_json(const Json& j, Alert& a);
void to_json(Json& j, const TimeRange& r);
void from_json(const Json& j, TimeRange& r);
void to_json(Json& j, const ExclusionSet& s);
void from_json(const Json& j, ExclusionSet& s);

// Parse helpers wrap nlohmann exceptions into Error(kParse).
Alert parse_alert_line(std::string_view line);
Event parse_event_line(std::string_view line);
std::vector<Policy> parse_policies(std::string_view text);
ExclusionSet parse_exclusions(std::string_view text);

void write_alert_line(std::ostream& out, const Alert& a);
void write_event_line(std::ostream& out, const Event& e);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace alertlens
