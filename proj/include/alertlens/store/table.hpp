#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "alertlens/core/model.hpp"
#include "alertlens/core/resource.hpp"

namespace alertlens {

using AlertIndex = std::uint32_t;
using UserId = std::uint32_t;
using PolicyIndex = std::uint32_t;
using ResourceId = std::uint32_t;

// Immutable columnar view of the stored alerts, ordered by
// (alert_time, alert_id). Dictionaries are sorted, so comparing ids
// compares the underlying strings.
struct AlertTable {
  std::vector<Alert> alerts;
  std::vector<std::uint8_t> flagged_invalid;

  std::vector<Timestamp> time;
  std::vector<DayIndex> day;
  std::vector<std::uint8_t> hour;
  std::vector<UserId> user;
  std::vector<PolicyIndex> policy;
  std::vector<int> severity;

  std::vector<std::string> users;
  std::vector<std::string> policies;
  std::vector<int> policy_severity;  // highest severity seen per policy
  std::vector<std::string> resources;
  std::vector<ResourceRef> resource_refs;

  // Distinct resources per alert (CSR).
  std::vector<std::uint32_t> resource_offsets;
  std::vector<ResourceId> resource_ids;

  // Inverted indexes; alert lists are ascending.
  std::vector<std::vector<AlertIndex>> alerts_by_user;
  std::vector<std::vector<AlertIndex>> alerts_by_policy;
  std::vector<std::vector<AlertIndex>> alerts_by_resource;
  std::unordered_map<std::string, std::vector<ResourceId>> resources_by_segment;
  std::unordered_map<std::string, std::vector<ResourceId>> resources_by_guid;
  std::unordered_map<std::string, AlertIndex> index_by_id;

  std::size_t size() const { return alerts.size(); }

  std::span<const ResourceId> resources_of(AlertIndex i) const {
    return {resource_ids.data() + resource_offsets[i], resource_offsets[i + 1] - resource_offsets[i]};
  }

  // First index with time >= t.
  AlertIndex lower_bound(Timestamp t) const;

  const UserId* find_user(std::string_view u) const;
  const PolicyIndex* find_policy(std::string_view p) const;
  const ResourceId* find_resource(std::string_view r) const;

  // Resources that equal r or, when permissive, match it by filename
  // segment or shared GUID.
  std::vector<ResourceId> matching_resources(const ResourceRef& r, bool permissive) const;

 private:
  friend std::shared_ptr<const AlertTable> build_table(std::vector<Alert> alerts, std::vector<std::uint8_t> flagged);
  std::unordered_map<std::string_view, UserId> user_lookup_;
  std::unordered_map<std::string_view, PolicyIndex> policy_lookup_;
  std::unordered_map<std::string_view, ResourceId> resource_lookup_;
};

// Alerts need not be sorted. flagged may be empty (all valid).
std::shared_ptr<const AlertTable> build_table(std::vector<Alert> alerts, std::vector<std::uint8_t> flagged = {});

}  // namespace alertlens
