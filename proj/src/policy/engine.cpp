#include "alertlens/policy/engine.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <unordered_map>

#include "alertlens/core/error.hpp"
#include "alertlens/core/hash.hpp"

namespace alertlens::policy {
namespace {

std::string lowered(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

struct CompiledClause {
  ClauseAttribute attribute;
  ClauseOperator op;
  std::string text;
  std::vector<std::string> options;
  HourRange hours;
};

using CompiledPolicy = std::vector<std::vector<CompiledClause>>;

CompiledClause compile(const PolicyClause& clause) {
  CompiledClause out{clause.attribute, clause.op, {}, {}, {}};
  if (const auto* s = std::get_if<std::string>(&clause.value)) {
    out.text = lowered(*s);
  } else if (const auto* list = std::get_if<std::vector<std::string>>(&clause.value)) {
    for (const auto& v : *list) out.options.push_back(lowered(v));
  } else {
    out.hours = std::get<HourRange>(clause.value);
  }
  return out;
}

CompiledPolicy compile(const Policy& policy) {
  CompiledPolicy out;
  for (const auto& conj : policy.disjuncts) {
    auto& dst = out.emplace_back();
    for (const auto& clause : conj) dst.push_back(compile(clause));
  }
  return out;
}

// Lower-cased string attributes of one event, computed once per event.
struct LoweredEvent {
  explicit LoweredEvent(const Event& e)
      : user(lowered(e.user)),
        endpoint(lowered(e.endpoint)),
        application(lowered(e.application)),
        resource(lowered(e.resource)),
        hour(hour_of(e.start_time)),
        resource_type(to_string(e.resource_type)),
        activity(to_string(e.activity)) {}

  std::string_view get(ClauseAttribute a) const {
    switch (a) {
      case ClauseAttribute::kUser: return user;
      case ClauseAttribute::kEndpoint: return endpoint;
      case ClauseAttribute::kApplication: return application;
      case ClauseAttribute::kResource: return resource;
      case ClauseAttribute::kResourceType: return resource_type;
      case ClauseAttribute::kActivity: return activity;
      case ClauseAttribute::kHourOfDay: break;
    }
    return {};
  }

  std::string user, endpoint, application, resource;
  int hour;
  std::string_view resource_type, activity;
};

bool hour_in(const HourRange& r, int hour) {
  return r.from <= r.to ? (hour >= r.from && hour <= r.to) : (hour >= r.from || hour <= r.to);
}

bool matches(const LoweredEvent& e, const CompiledClause& c) {
  if (c.op == ClauseOperator::kHourInRange) return hour_in(c.hours, e.hour);
  std::string_view value = e.get(c.attribute);
  switch (c.op) {
    case ClauseOperator::kEquals: return value == c.text;
    case ClauseOperator::kNotEquals: return value != c.text;
    case ClauseOperator::kContains: return value.find(c.text) != std::string_view::npos;
    case ClauseOperator::kOneOf:
      return std::find(c.options.begin(), c.options.end(), value) != c.options.end();
    case ClauseOperator::kHourInRange: break;
  }
  return false;
}

bool matches(const LoweredEvent& e, const CompiledPolicy& p) {
  return std::any_of(p.begin(), p.end(), [&](const auto& conj) {
    return std::all_of(conj.begin(), conj.end(), [&](const auto& c) { return matches(e, c); });
  });
}

}  // namespace

bool eval_clause(const Event& event, const PolicyClause& clause) {
  return matches(LoweredEvent(event), compile(clause));
}

bool eval_policy(const Event& event, const Policy& policy) {
  return matches(LoweredEvent(event), compile(policy));
}

std::string make_alert_id(std::string_view policy_id, std::string_view first_event_id) {
  std::uint64_t h = fnv1a(policy_id);
  h = fnv1a(std::string_view("\x1f", 1), h);
  h = fnv1a(first_event_id, h);
  return "al-" + to_hex(h);
}

std::vector<Alert> detect_stream(std::span<const Event> events, std::span<const Policy> policies,
                                 const BundlingConfig& config) {
  if (config.gap_seconds <= 0) throw Error(ErrorCode::kConfig, "gap_seconds must be positive");
  std::vector<CompiledPolicy> compiled;
  compiled.reserve(policies.size());
  for (const auto& p : policies) {
    validate_policy(p);
    compiled.push_back(compile(p));
  }

  struct OpenBundle {
    std::size_t alert_index;
    Timestamp last_start;
  };
  std::unordered_map<std::string, OpenBundle> open;
  std::vector<Alert> alerts;

  Timestamp previous = std::numeric_limits<Timestamp>::min();
  std::string key;
  for (const auto& event : events) {
    if (event.start_time < previous) {
      throw Error(ErrorCode::kOrdering, "events are not sorted by start_time at " + event.event_id);
    }
    previous = event.start_time;
    const LoweredEvent lowered_event(event);
    for (std::size_t p = 0; p < compiled.size(); ++p) {
      if (!matches(lowered_event, compiled[p])) continue;

      key.clear();
      key += std::to_string(p);
      key += '\x1f';
      key += event.user;
      key += '\x1f';
      key += event.endpoint;
      key += '\x1f';
      key += event.application;
      auto it = open.find(key);
      if (it != open.end() && event.start_time - it->second.last_start <= config.gap_seconds &&
          alerts[it->second.alert_index].events.size() < BundlingConfig::max_events) {
        alerts[it->second.alert_index].events.push_back(event);
        it->second.last_start = event.start_time;
        continue;
      }
      Alert alert;
      alert.alert_id = make_alert_id(policies[p].policy_id, event.event_id);
      alert.alert_time = event.start_time;
      alert.policy_id = policies[p].policy_id;
      alert.severity = policies[p].severity;
      alert.events.push_back(event);
      alerts.push_back(std::move(alert));
      open.insert_or_assign(key, OpenBundle{alerts.size() - 1, event.start_time});
    }
  }

  std::stable_sort(alerts.begin(), alerts.end(), [](const Alert& a, const Alert& b) {
    return a.alert_time != b.alert_time ? a.alert_time < b.alert_time : a.alert_id < b.alert_id;
  });
  return alerts;
}

}  // namespace alertlens::policy
