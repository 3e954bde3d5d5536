#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "alertlens/core/time.hpp"

namespace alertlens {

enum class ResourceType { kFile, kUsbDevice, kOther };
enum class Activity { kCreate, kRead, kUpdate, kDelete, kMount };

std::string_view to_string(ResourceType t);
std::string_view to_string(Activity a);
ResourceType parse_resource_type(std::string_view s);
Activity parse_activity(std::string_view s);

struct Event {
  std::string event_id;
  std::string user;
  std::string endpoint;
  std::string application;
  std::string resource;
  ResourceType resource_type = ResourceType::kFile;
  Activity activity = Activity::kRead;
  Timestamp start_time = 0;
  Timestamp end_time = 0;

  bool operator==(const Event&) const = default;
};

enum class ClauseAttribute { kUser, kEndpoint, kApplication, kResource, kResourceType, kActivity, kHourOfDay };
enum class ClauseOperator { kEquals, kNotEquals, kContains, kOneOf, kHourInRange };

std::string_view to_string(ClauseAttribute a);
std::string_view to_string(ClauseOperator o);
ClauseAttribute parse_clause_attribute(std::string_view s);
ClauseOperator parse_clause_operator(std::string_view s);

struct HourRange {
  int from = 0;  // inclusive, 0..23
  int to = 0;    // inclusive, 0..23; from > to wraps past midnight

  bool operator==(const HourRange&) const = default;
};

using ClauseValue = std::variant<std::string, std::vector<std::string>, HourRange>;

struct PolicyClause {
  ClauseAttribute attribute = ClauseAttribute::kApplication;
  ClauseOperator op = ClauseOperator::kEquals;
  ClauseValue value;

  bool operator==(const PolicyClause&) const = default;
};

// Throws Error(kConfig) when the operator and value shape disagree.
void validate_clause(const PolicyClause& clause);

// A disjunction of clause conjunctions.
struct Policy {
  std::string policy_id;
  std::string name;
  int severity = 1;  // 1..5, 5 most severe
  std::vector<std::vector<PolicyClause>> disjuncts;

  bool operator==(const Policy&) const = default;
};

void validate_policy(const Policy& policy);

inline constexpr std::size_t kMaxEventsPerAlert = 100;

struct Alert {
  std::string alert_id;
  Timestamp alert_time = 0;
  std::string policy_id;
  int severity = 1;
  std::vector<Event> events;

  bool operator==(const Alert&) const = default;
};

// Empty result means the alert is well formed.
std::vector<std::string> validate_alert(const Alert& alert);

struct TimeRange {
  Timestamp start = 0;  // inclusive
  Timestamp end = 0;    // exclusive

  bool contains(Timestamp t) const { return t >= start && t < end; }
  bool valid() const { return start < end; }
  bool operator==(const TimeRange&) const = default;
};

TimeRange day_range(DayIndex d);

struct ExclusionSet {
  std::vector<TimeRange> excluded_ranges;
  std::vector<std::string> excluded_users;

  bool empty() const { return excluded_ranges.empty() && excluded_users.empty(); }
  bool operator==(const ExclusionSet&) const = default;
};

// Sorts and merges overlapping/adjacent ranges, sorts and dedupes users.
// Throws Error(kRange) on an empty or inverted range.
ExclusionSet normalize(ExclusionSet set);

bool is_excluded(const ExclusionSet& normalized, const std::string& user, Timestamp alert_time);

// Stable content hash of a normalized exclusion set.
std::string fingerprint(const ExclusionSet& normalized);

// Attributes reported by alert_constants, in report order.
enum class ConstantAttribute { kUser, kEndpoint, kApplication, kResource, kResourceType, kActivity, kPolicyId, kSeverity };
std::string_view to_string(ConstantAttribute a);

using AlertConstants = std::map<ConstantAttribute, std::optional<std::string>>;

// For each attribute, the value shared by every event of every alert (or
// every alert, for policy_id/severity); absent when it varies.
// Throws Error(kEmptySelection) on an empty list.
AlertConstants alert_constants(std::span<const Alert> alerts);

// String form of an event attribute, as seen by clause evaluation.
std::string attribute_value(const Event& e, ClauseAttribute a);

}  // namespace alertlens
