#include "alertlens/store/kernels.hpp"

#include <algorithm>

namespace alertlens::kernels {
namespace {

int default_threads() {
#ifdef _OPENMP
  static const int n = omp_get_max_threads();
  return n;
#else
  return 1;
#endif
}

std::vector<AlertIndex> merge_lists(const std::vector<const std::vector<AlertIndex>*>& lists) {
  std::vector<AlertIndex> out;
  std::size_t total = 0;
  for (const auto* l : lists) total += l->size();
  out.reserve(total);
  for (const auto* l : lists) out.insert(out.end(), l->begin(), l->end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n > 0 ? n : default_threads());
#else
  (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

CompiledSelector compile(const AlertTable& t, const Selector& s) {
  CompiledSelector c;
  c.start = s.range.start;
  c.end = s.range.end;
  c.hour = s.hour.value_or(-1);
  c.lo = t.lower_bound(s.range.start);
  c.hi = std::max(c.lo, t.lower_bound(s.range.end));
  if (s.range.end <= s.range.start || c.lo == c.hi) c.empty = true;

  std::vector<const std::vector<AlertIndex>*> user_lists;
  if (!s.users.empty()) {
    c.user_ok.assign(t.users.size(), 0);
    for (const auto& u : s.users) {
      if (const UserId* id = t.find_user(u)) {
        c.user_ok[*id] = 1;
        user_lists.push_back(&t.alerts_by_user[*id]);
      }
    }
    if (user_lists.empty()) c.empty = true;
  }
  if (!s.policies.empty()) {
    c.policy_ok.assign(t.policies.size(), 0);
    bool any = false;
    for (const auto& p : s.policies) {
      if (const PolicyIndex* id = t.find_policy(p)) {
        c.policy_ok[*id] = 1;
        any = true;
      }
    }
    if (!any) c.empty = true;
  }
  std::vector<const std::vector<AlertIndex>*> resource_lists;
  if (!s.resources.empty()) {
    c.resource_ok.assign(t.resources.size(), 0);
    for (const auto& raw : s.resources) {
      ResourceRef ref;
      if (raw.empty()) {
        ref.raw = raw;
      } else {
        ref = parse_resource(raw);
      }
      for (ResourceId r : t.matching_resources(ref, s.permissive)) {
        if (!c.resource_ok[r]) resource_lists.push_back(&t.alerts_by_resource[r]);
        c.resource_ok[r] = 1;
      }
    }
    if (resource_lists.empty()) c.empty = true;
  }
  if (c.empty) return c;

  // Use an inverted index when it is smaller than the time slice.
  auto slice = [&](const std::vector<const std::vector<AlertIndex>*>& lists) {
    std::size_t n = 0;
    for (const auto* l : lists) {
      n += static_cast<std::size_t>(std::lower_bound(l->begin(), l->end(), c.hi) -
                                    std::lower_bound(l->begin(), l->end(), c.lo));
    }
    return n;
  };
  const std::size_t range_size = c.hi - c.lo;
  const std::vector<const std::vector<AlertIndex>*>* best = nullptr;
  std::size_t best_size = range_size;
  if (!user_lists.empty()) {
    const std::size_t n = slice(user_lists);
    if (n < best_size) best = &user_lists, best_size = n;
  }
  if (!resource_lists.empty()) {
    const std::size_t n = slice(resource_lists);
    if (n < best_size) best = &resource_lists, best_size = n;
  }
  if (best != nullptr) {
    std::vector<AlertIndex> merged = merge_lists(*best);
    auto first = std::lower_bound(merged.begin(), merged.end(), c.lo);
    auto last = std::lower_bound(first, merged.end(), c.hi);
    c.list.assign(first, last);
    c.use_list = true;
  }
  return c;
}

std::vector<std::uint8_t> exclusion_mask(const AlertTable& t, const ExclusionSet& normalized) {
  const auto n = static_cast<std::int64_t>(t.size());
  std::vector<std::uint8_t> mask(t.size(), 0);
  if (normalized.empty()) return mask;
  std::vector<std::uint8_t> user_excluded(t.users.size(), 0);
  for (const auto& u : normalized.excluded_users) {
    if (const UserId* id = t.find_user(u)) user_excluded[*id] = 1;
  }
  const auto& ranges = normalized.excluded_ranges;
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    bool out = user_excluded[t.user[i]] != 0;
    if (!out && !ranges.empty()) {
      // ranges are sorted and disjoint
      auto it = std::upper_bound(ranges.begin(), ranges.end(), t.time[i],
                                 [](Timestamp ts, const TimeRange& r) { return ts < r.start; });
      out = it != ranges.begin() && std::prev(it)->contains(t.time[i]);
    }
    mask[i] = out ? 1 : 0;
  }
  return mask;
}

std::vector<AlertIndex> select(const Snapshot& snap, const CompiledSelector& c) {
  return map_select<AlertIndex>(snap, c, [](AlertIndex i) { return i; });
}

}  // namespace alertlens::kernels
