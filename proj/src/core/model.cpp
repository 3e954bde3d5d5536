#include "alertlens/core/model.hpp"

#include <algorithm>
#include <array>

#include "alertlens/core/error.hpp"
#include "alertlens/core/hash.hpp"

namespace alertlens {
namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::array<std::string_view, N>& names, const char* what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<E>(i);
  }
  throw Error(ErrorCode::kParse, std::string("unknown ") + what + ": '" + std::string(s) + "'");
}

constexpr std::array<std::string_view, 3> kResourceTypeNames{"file", "usb_device", "other"};
constexpr std::array<std::string_view, 5> kActivityNames{"create", "read", "update", "delete", "mount"};
constexpr std::array<std::string_view, 7> kAttributeNames{
    "user", "endpoint", "application", "resource", "resource_type", "activity", "hour_of_day"};
constexpr std::array<std::string_view, 5> kOperatorNames{"equals", "not_equals", "contains", "one_of",
                                                         "hour_in_range"};
constexpr std::array<std::string_view, 8> kConstantNames{
    "user", "endpoint", "application", "resource", "resource_type", "activity", "policy_id", "severity"};

}  // namespace

std::string_view to_string(ResourceType t) { return kResourceTypeNames[static_cast<std::size_t>(t)]; }
std::string_view to_string(Activity a) { return kActivityNames[static_cast<std::size_t>(a)]; }
std::string_view to_string(ClauseAttribute a) { return kAttributeNames[static_cast<std::size_t>(a)]; }
std::string_view to_string(ClauseOperator o) { return kOperatorNames[static_cast<std::size_t>(o)]; }
std::string_view to_string(ConstantAttribute a) { return kConstantNames[static_cast<std::size_t>(a)]; }

ResourceType parse_resource_type(std::string_view s) {
  return parse_enum<ResourceType>(s, kResourceTypeNames, "resource_type");
}
Activity parse_activity(std::string_view s) { return parse_enum<Activity>(s, kActivityNames, "activity"); }
ClauseAttribute parse_clause_attribute(std::string_view s) {
  return parse_enum<ClauseAttribute>(s, kAttributeNames, "clause attribute");
}
ClauseOperator parse_clause_operator(std::string_view s) {
  return parse_enum<ClauseOperator>(s, kOperatorNames, "clause operator");
}

void validate_clause(const PolicyClause& clause) {
  const bool hour_attr = clause.attribute == ClauseAttribute::kHourOfDay;
  switch (clause.op) {
    case ClauseOperator::kHourInRange: {
      if (!hour_attr) {
        throw Error(ErrorCode::kConfig, "hour_in_range requires attribute hour_of_day");
      }
      const auto* range = std::get_if<HourRange>(&clause.value);
      if (range == nullptr || range->from < 0 || range->from > 23 || range->to < 0 || range->to > 23) {
        throw Error(ErrorCode::kConfig, "hour_in_range needs an hour pair in 0..23");
      }
      return;
    }
    case ClauseOperator::kOneOf:
      if (!std::holds_alternative<std::vector<std::string>>(clause.value)) {
        throw Error(ErrorCode::kConfig, "one_of needs a string list");
      }
      break;
    default:
      if (!std::holds_alternative<std::string>(clause.value)) {
        throw Error(ErrorCode::kConfig, std::string(to_string(clause.op)) + " needs a string value");
      }
      break;
  }
  if (hour_attr) {
    throw Error(ErrorCode::kConfig, "hour_of_day only supports hour_in_range");
  }
}

void validate_policy(const Policy& policy) {
  if (policy.policy_id.empty()) throw Error(ErrorCode::kConfig, "policy_id is empty");
  if (policy.severity < 1 || policy.severity > 5) {
    throw Error(ErrorCode::kConfig, "policy " + policy.policy_id + ": severity must be in 1..5");
  }
  if (policy.disjuncts.empty()) {
    throw Error(ErrorCode::kConfig, "policy " + policy.policy_id + " has no disjuncts");
  }
  for (const auto& conj : policy.disjuncts) {
    if (conj.empty()) throw Error(ErrorCode::kConfig, "policy " + policy.policy_id + " has an empty disjunct");
    for (const auto& clause : conj) validate_clause(clause);
  }
}

std::vector<std::string> validate_alert(const Alert& alert) {
  std::vector<std::string> violations;
  if (alert.events.empty()) {
    violations.emplace_back("no events");
    return violations;
  }
  if (alert.events.size() > kMaxEventsPerAlert) violations.emplace_back("event count exceeds 100");

  const Event& first = alert.events.front();
  bool mixed_user = false, mixed_endpoint = false, mixed_application = false;
  bool bad_span = false, empty_field = false;
  for (const auto& e : alert.events) {
    mixed_user |= e.user != first.user;
    mixed_endpoint |= e.endpoint != first.endpoint;
    mixed_application |= e.application != first.application;
    bad_span |= e.end_time < e.start_time;
    empty_field |= e.user.empty() || e.endpoint.empty() || e.application.empty();
  }
  if (mixed_user) violations.emplace_back("mixed user");
  if (mixed_endpoint) violations.emplace_back("mixed endpoint");
  if (mixed_application) violations.emplace_back("mixed application");
  if (bad_span) violations.emplace_back("event ends before it starts");
  if (empty_field) violations.emplace_back("empty user, endpoint or application");
  if (alert.alert_time != first.start_time) violations.emplace_back("alert_time differs from first event");
  if (alert.severity < 1 || alert.severity > 5) violations.emplace_back("severity out of range");
  return violations;
}

TimeRange day_range(DayIndex d) { return {day_start(d), day_start(d + 1)}; }

ExclusionSet normalize(ExclusionSet set) {
  for (const auto& r : set.excluded_ranges) {
    if (!r.valid()) throw Error(ErrorCode::kRange, "excluded range must have start < end");
  }
  std::sort(set.excluded_ranges.begin(), set.excluded_ranges.end(),
            [](const TimeRange& a, const TimeRange& b) { return a.start < b.start; });
  std::vector<TimeRange> merged;
  for (const auto& r : set.excluded_ranges) {
    if (!merged.empty() && r.start <= merged.back().end) {
      merged.back().end = std::max(merged.back().end, r.end);
    } else {
      merged.push_back(r);
    }
  }
  set.excluded_ranges = std::move(merged);
  std::sort(set.excluded_users.begin(), set.excluded_users.end());
  set.excluded_users.erase(std::unique(set.excluded_users.begin(), set.excluded_users.end()),
                           set.excluded_users.end());
  return set;
}

bool is_excluded(const ExclusionSet& normalized, const std::string& user, Timestamp alert_time) {
  if (std::binary_search(normalized.excluded_users.begin(), normalized.excluded_users.end(), user)) {
    return true;
  }
  const auto& ranges = normalized.excluded_ranges;
  auto it = std::upper_bound(ranges.begin(), ranges.end(), alert_time,
                             [](Timestamp t, const TimeRange& r) { return t < r.start; });
  return it != ranges.begin() && std::prev(it)->contains(alert_time);
}

std::string fingerprint(const ExclusionSet& normalized) {
  std::string canon = "r";
  for (const auto& r : normalized.excluded_ranges) {
    canon += ':' + std::to_string(r.start) + '-' + std::to_string(r.end);
  }
  canon += "|u";
  for (const auto& u : normalized.excluded_users) {
    canon += ':';
    canon += u;
  }
  return to_hex(fnv1a(canon));
}

std::string attribute_value(const Event& e, ClauseAttribute a) {
  switch (a) {
    case ClauseAttribute::kUser: return e.user;
    case ClauseAttribute::kEndpoint: return e.endpoint;
    case ClauseAttribute::kApplication: return e.application;
    case ClauseAttribute::kResource: return e.resource;
    case ClauseAttribute::kResourceType: return std::string(to_string(e.resource_type));
    case ClauseAttribute::kActivity: return std::string(to_string(e.activity));
    case ClauseAttribute::kHourOfDay: return std::to_string(hour_of(e.start_time));
  }
  return {};
}

AlertConstants alert_constants(std::span<const Alert> alerts) {
  if (alerts.empty()) throw Error(ErrorCode::kEmptySelection, "alert selection is empty");

  AlertConstants out;
  auto fold = [&](ConstantAttribute key, const std::string& value, bool first) {
    auto& slot = out[key];
    if (first) {
      slot = value;
    } else if (slot && *slot != value) {
      slot.reset();
    }
  };

  bool first_alert = true;
  bool first_event = true;
  for (const auto& alert : alerts) {
    fold(ConstantAttribute::kPolicyId, alert.policy_id, first_alert);
    fold(ConstantAttribute::kSeverity, std::to_string(alert.severity), first_alert);
    first_alert = false;
    for (const auto& e : alert.events) {
      fold(ConstantAttribute::kUser, e.user, first_event);
      fold(ConstantAttribute::kEndpoint, e.endpoint, first_event);
      fold(ConstantAttribute::kApplication, e.application, first_event);
      fold(ConstantAttribute::kResource, e.resource, first_event);
      fold(ConstantAttribute::kResourceType, std::string(to_string(e.resource_type)), first_event);
      fold(ConstantAttribute::kActivity, std::string(to_string(e.activity)), first_event);
      first_event = false;
    }
  }
  // alerts without events leave event attributes undetermined
  for (auto key : {ConstantAttribute::kUser, ConstantAttribute::kEndpoint, ConstantAttribute::kApplication,
                   ConstantAttribute::kResource, ConstantAttribute::kResourceType, ConstantAttribute::kActivity}) {
    out.try_emplace(key, std::nullopt);
  }
  return out;
}

}  // namespace alertlens
