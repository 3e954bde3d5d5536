#pragma once

#include <span>
#include <vector>

#include "alertlens/core/model.hpp"

namespace alertlens::policy {

struct BundlingConfig {
  Timestamp gap_seconds = 60;
  static constexpr std::size_t max_events = kMaxEventsPerAlert;
};

// String comparisons are case-insensitive; hour_in_range is inclusive at both
// ends and wraps past midnight when from > to.
bool eval_clause(const Event& event, const PolicyClause& clause);

// OR over disjuncts of AND over clauses.
bool eval_policy(const Event& event, const Policy& policy);

// Content-derived alert id: stable for a given policy and first event.
std::string make_alert_id(std::string_view policy_id, std::string_view first_event_id);

// Evaluates a time-ordered event stream and bundles triggers into alerts.
// A trigger joins the open bundle for (policy, user, endpoint, application)
// when it starts within gap_seconds of that bundle's last event and the
// bundle holds fewer than 100 events. Output is ordered by
// (alert_time, alert_id). Throws Error(kOrdering) on unsorted input.
std::vector<Alert> detect_stream(std::span<const Event> events, std::span<const Policy> policies,
                                 const BundlingConfig& config = {});

}  // namespace alertlens::policy
