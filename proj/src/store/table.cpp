#include "alertlens/store/table.hpp"

#include <algorithm>
#include <numeric>

namespace alertlens {
namespace {

template <typename Id>
std::vector<Id> intern(std::vector<std::string_view>& keys, std::vector<std::string>& dict) {
  std::vector<std::string_view> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  dict.assign(sorted.begin(), sorted.end());
  std::vector<Id> ids(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    ids[i] = static_cast<Id>(std::lower_bound(sorted.begin(), sorted.end(), keys[i]) - sorted.begin());
  }
  return ids;
}

}  // namespace

std::shared_ptr<const AlertTable> build_table(std::vector<Alert> alerts, std::vector<std::uint8_t> flagged) {
  if (flagged.size() != alerts.size()) flagged.assign(alerts.size(), 0);
  std::vector<std::size_t> order(alerts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Alert& x = alerts[a];
    const Alert& y = alerts[b];
    return x.alert_time != y.alert_time ? x.alert_time < y.alert_time : x.alert_id < y.alert_id;
  });

  auto table = std::make_shared<AlertTable>();
  AlertTable& t = *table;
  const std::size_t n = alerts.size();
  t.alerts.reserve(n);
  t.flagged_invalid.reserve(n);
  for (std::size_t i : order) {
    t.alerts.push_back(std::move(alerts[i]));
    t.flagged_invalid.push_back(flagged[i]);
  }
  alerts.clear();
  alerts.shrink_to_fit();

  t.time.resize(n);
  t.day.resize(n);
  t.hour.resize(n);
  t.severity.resize(n);
  std::vector<std::string_view> user_keys(n), policy_keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Alert& a = t.alerts[i];
    t.time[i] = a.alert_time;
    t.day[i] = day_of(a.alert_time);
    t.hour[i] = static_cast<std::uint8_t>(hour_of(a.alert_time));
    t.severity[i] = a.severity;
    user_keys[i] = a.events.empty() ? std::string_view{} : std::string_view(a.events.front().user);
    policy_keys[i] = a.policy_id;
  }
  t.user = intern<UserId>(user_keys, t.users);
  t.policy = intern<PolicyIndex>(policy_keys, t.policies);
  t.policy_severity.assign(t.policies.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    t.policy_severity[t.policy[i]] = std::max(t.policy_severity[t.policy[i]], t.severity[i]);
  }

  // Resources: distinct per alert, interned globally.
  std::vector<std::string_view> resource_keys;
  std::vector<std::uint32_t> offsets{0};
  offsets.reserve(n + 1);
  std::vector<std::string_view> scratch;
  for (const Alert& a : t.alerts) {
    scratch.clear();
    for (const Event& e : a.events) scratch.push_back(e.resource);
    std::sort(scratch.begin(), scratch.end());
    scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
    resource_keys.insert(resource_keys.end(), scratch.begin(), scratch.end());
    offsets.push_back(static_cast<std::uint32_t>(resource_keys.size()));
  }
  t.resource_ids = intern<ResourceId>(resource_keys, t.resources);
  t.resource_offsets = std::move(offsets);
  t.resource_refs.reserve(t.resources.size());
  for (const std::string& r : t.resources) {
    ResourceRef ref;
    if (r.empty()) {
      ref.raw = r;
    } else {
      ref = parse_resource(r);
    }
    t.resource_refs.push_back(std::move(ref));
  }

  t.alerts_by_user.assign(t.users.size(), {});
  t.alerts_by_policy.assign(t.policies.size(), {});
  t.alerts_by_resource.assign(t.resources.size(), {});
  for (std::size_t i = 0; i < n; ++i) {
    const auto idx = static_cast<AlertIndex>(i);
    t.alerts_by_user[t.user[i]].push_back(idx);
    t.alerts_by_policy[t.policy[i]].push_back(idx);
    for (ResourceId r : t.resources_of(idx)) t.alerts_by_resource[r].push_back(idx);
    t.index_by_id.emplace(t.alerts[i].alert_id, idx);
  }
  for (std::size_t r = 0; r < t.resources.size(); ++r) {
    const ResourceRef& ref = t.resource_refs[r];
    if (ref.kind == ResourceKind::kFilepath) t.resources_by_segment[ref.filename_segment].push_back(static_cast<ResourceId>(r));
    for (const std::string& g : ref.guids) t.resources_by_guid[g].push_back(static_cast<ResourceId>(r));
  }
  for (std::size_t i = 0; i < t.users.size(); ++i) t.user_lookup_.emplace(t.users[i], static_cast<UserId>(i));
  for (std::size_t i = 0; i < t.policies.size(); ++i) t.policy_lookup_.emplace(t.policies[i], static_cast<PolicyIndex>(i));
  for (std::size_t i = 0; i < t.resources.size(); ++i) t.resource_lookup_.emplace(t.resources[i], static_cast<ResourceId>(i));
  return table;
}

AlertIndex AlertTable::lower_bound(Timestamp t) const {
  return static_cast<AlertIndex>(std::lower_bound(time.begin(), time.end(), t) - time.begin());
}

const UserId* AlertTable::find_user(std::string_view u) const {
  auto it = user_lookup_.find(u);
  return it == user_lookup_.end() ? nullptr : &it->second;
}

const PolicyIndex* AlertTable::find_policy(std::string_view p) const {
  auto it = policy_lookup_.find(p);
  return it == policy_lookup_.end() ? nullptr : &it->second;
}

const ResourceId* AlertTable::find_resource(std::string_view r) const {
  auto it = resource_lookup_.find(r);
  return it == resource_lookup_.end() ? nullptr : &it->second;
}

std::vector<ResourceId> AlertTable::matching_resources(const ResourceRef& r, bool permissive) const {
  std::vector<ResourceId> out;
  if (const ResourceId* exact = find_resource(r.raw)) out.push_back(*exact);
  if (permissive) {
    auto consider = [&](ResourceId id) {
      if (resources_match(r, resource_refs[id], true)) out.push_back(id);
    };
    if (r.kind == ResourceKind::kFilepath) {
      if (auto it = resources_by_segment.find(r.filename_segment); it != resources_by_segment.end()) {
        for (ResourceId id : it->second) consider(id);
      }
    }
    if (r.kind == ResourceKind::kUsbDescriptor) {
      for (const std::string& g : r.guids) {
        if (auto it = resources_by_guid.find(g); it != resources_by_guid.end()) {
          for (ResourceId id : it->second) consider(id);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace alertlens
