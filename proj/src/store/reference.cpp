#include "alertlens/store/reference.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "alertlens/core/error.hpp"

namespace alertlens::reference {
namespace {

std::vector<const Alert*> visible_sorted(std::span<const Alert> alerts, const ExclusionSet& exclusions) {
  const ExclusionSet ex = normalize(exclusions);
  std::vector<const Alert*> out;
  for (const Alert& a : alerts) {
    if (!is_excluded(ex, a.events.front().user, a.alert_time)) out.push_back(&a);
  }
  std::sort(out.begin(), out.end(), [](const Alert* a, const Alert* b) {
    return a->alert_time != b->alert_time ? a->alert_time < b->alert_time : a->alert_id < b->alert_id;
  });
  return out;
}

template <typename T>
bool listed(const std::vector<T>& list, const T& v) {
  return list.empty() || std::find(list.begin(), list.end(), v) != list.end();
}

std::string day_name(Timestamp t) { return format_day(day_of(t)); }

std::string two_digit(int h) { return (h < 10 ? "0" : "") + std::to_string(h); }

Cell scan(const std::vector<const Alert*>& pool, const Selector& s, std::string row, std::string col) {
  Cell c{std::move(row), std::move(col), 0, {}};
  for (const Alert* a : pool) {
    if (selector_matches(*a, s)) c.alert_ids.push_back(a->alert_id);
  }
  c.alert_count = c.alert_ids.size();
  return c;
}

std::vector<std::string> days_of(const TimeRange& r) {
  std::vector<std::string> out;
  for (DayIndex d = day_of(r.start); d <= day_of(r.end - 1); ++d) out.push_back(format_day(d));
  return out;
}

TimeRange day_slice(const TimeRange& r, const std::string& day) {
  const Timestamp s = day_start(parse_day(day));
  return {std::max(r.start, s), std::min(r.end, s + kSecondsPerDay)};
}

std::size_t top_n_of(const GridSpec& s) {
  if (s.top_n) return *s.top_n;
  if (s.view == GridView::kDailyTopUsers) return 300;
  if (s.view == GridView::kDailyTopUsersByPolicy) return 50;
  if (s.view == GridView::kHistoricTopUsers) return 100;
  return static_cast<std::size_t>(-1);
}

template <typename T>
std::vector<T> paged(const std::vector<T>& all, const GridSpec& s) {
  const std::size_t lo = std::min(s.offset, all.size());
  const std::size_t n = std::min(all.size() - lo, top_n_of(s));
  return {all.begin() + static_cast<std::ptrdiff_t>(lo), all.begin() + static_cast<std::ptrdiff_t>(lo + n)};
}

// (user, count) by count desc then user asc.
std::vector<std::pair<std::string, std::size_t>> rank_users(const std::vector<const Alert*>& pool, const Selector& s) {
  std::map<std::string, std::size_t> counts;
  for (const Alert* a : pool) {
    if (selector_matches(*a, s)) ++counts[a->events.front().user];
  }
  std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

std::map<std::string, int> policy_severities(const std::vector<const Alert*>& pool) {
  std::map<std::string, int> sev;
  for (const Alert* a : pool) sev[a->policy_id] = std::max(sev[a->policy_id], a->severity);
  return sev;
}

std::vector<std::string> order_policies(const std::map<std::string, std::size_t>& totals,
                                        const std::map<std::string, int>& severity) {
  std::vector<std::string> rows;
  for (const auto& [p, n] : totals) {
    if (n > 0) rows.push_back(p);
  }
  std::sort(rows.begin(), rows.end(), [&](const std::string& a, const std::string& b) {
    const int sa = severity.at(a), sb = severity.at(b);
    if (sa != sb) return sa > sb;
    if (totals.at(a) != totals.at(b)) return totals.at(a) > totals.at(b);
    return a < b;
  });
  return rows;
}

std::string attribute(const Alert& a, FacetAttribute attr) {
  const Event& e = a.events.front();
  switch (attr) {
    case FacetAttribute::kUser: return e.user;
    case FacetAttribute::kPolicy: return a.policy_id;
    case FacetAttribute::kResource: return e.resource;
    case FacetAttribute::kResourceType: return std::string(to_string(e.resource_type));
    case FacetAttribute::kActivity: return std::string(to_string(e.activity));
    case FacetAttribute::kEndpoint: return e.endpoint;
    case FacetAttribute::kApplication: return e.application;
    case FacetAttribute::kAlertHour: return std::to_string((a.alert_time % kSecondsPerDay + kSecondsPerDay) % kSecondsPerDay / 3600);
    case FacetAttribute::kEventCount: return std::to_string(a.events.size());
    case FacetAttribute::kAlertTime: return format_timestamp(a.alert_time);
    case FacetAttribute::kSeverity: return std::to_string(a.severity);
  }
  return {};
}

bool numeric(FacetAttribute a) {
  return a == FacetAttribute::kAlertHour || a == FacetAttribute::kEventCount || a == FacetAttribute::kSeverity;
}

}  // namespace

bool selector_matches(const Alert& a, const Selector& s) {
  if (!s.range.contains(a.alert_time)) return false;
  if (!listed(s.users, a.events.front().user)) return false;
  if (!listed(s.policies, a.policy_id)) return false;
  if (s.hour && hour_of(a.alert_time) != *s.hour) return false;
  if (s.resources.empty()) return true;
  for (const Event& e : a.events) {
    for (const std::string& r : s.resources) {
      if (e.resource == r) return true;
      if (s.permissive && !e.resource.empty() && !r.empty() &&
          resources_match(parse_resource(e.resource), parse_resource(r), true)) {
        return true;
      }
    }
  }
  return false;
}

std::vector<std::string> select(std::span<const Alert> alerts, const ExclusionSet& exclusions, const Selector& s) {
  return scan(visible_sorted(alerts, exclusions), s, "", "").alert_ids;
}

std::vector<WeekBucket> weekly_histogram(std::span<const Alert> alerts, const ExclusionSet& exclusions) {
  if (alerts.empty()) return {};
  Timestamp lo = alerts.front().alert_time, hi = lo;
  for (const Alert& a : alerts) lo = std::min(lo, a.alert_time), hi = std::max(hi, a.alert_time);
  std::map<DayIndex, std::size_t> weeks;
  for (DayIndex w = iso_week_start(day_of(lo)); w <= iso_week_start(day_of(hi)); w += 7) weeks[w] = 0;
  for (const Alert* a : visible_sorted(alerts, exclusions)) ++weeks[iso_week_start(day_of(a->alert_time))];
  std::vector<WeekBucket> out;
  for (const auto& [w, n] : weeks) out.push_back({w, n});
  return out;
}

Grid grid(std::span<const Alert> alerts, const ExclusionSet& exclusions, const GridSpec& spec) {
  validate(spec);
  const auto pool = visible_sorted(alerts, exclusions);
  Selector base;
  base.range = spec.range;
  base.policies = spec.policy_filter;
  const std::string total(kTotalKey);
  Grid g;

  auto calendar = [&](const Selector& s, const std::string& col) {
    g.columns = {col};
    for (const std::string& d : days_of(spec.range)) {
      Selector cell = s;
      cell.range = day_slice(spec.range, d);
      g.rows.push_back(d);
      g.cells.push_back(scan(pool, cell, d, col));
    }
    g.total_rows = g.rows.size();
  };

  switch (spec.view) {
    case GridView::kCalendar: calendar(base, "all"); break;
    case GridView::kSingleUserCalendar: {
      Selector s = base;
      s.users = spec.focus_users;
      calendar(s, spec.focus_users.front());
      break;
    }
    case GridView::kTargetedCalendar: {
      Selector s = base;
      s.users = spec.focus_users;
      s.resources = spec.focus_resources;
      s.permissive = spec.permissive;
      calendar(s, "targeted");
      break;
    }
    case GridView::kDailyTopUsers: {
      const std::string day = day_name(spec.range.start);
      const auto ranked = rank_users(pool, base);
      g.columns = {day};
      for (const auto& [user, n] : paged(ranked, spec)) {
        Selector s = base;
        s.users = {user};
        g.rows.push_back(user);
        g.cells.push_back(scan(pool, s, user, day));
      }
      g.total_rows = ranked.size();
      break;
    }
    case GridView::kHistoricTopUsers: {
      std::map<std::pair<std::string, std::string>, std::size_t> counts;
      for (const Alert* a : pool) {
        if (selector_matches(*a, base)) ++counts[{a->events.front().user, day_name(a->alert_time)}];
      }
      std::vector<std::pair<std::pair<std::string, std::string>, std::size_t>> ranked(counts.begin(), counts.end());
      std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
      std::set<std::string> days;
      for (const auto& [key, n] : paged(ranked, spec)) {
        Selector s = base;
        s.users = {key.first};
        s.range = day_slice(spec.range, key.second);
        if (std::find(g.rows.begin(), g.rows.end(), key.first) == g.rows.end()) g.rows.push_back(key.first);
        days.insert(key.second);
        g.cells.push_back(scan(pool, s, key.first, key.second));
      }
      g.columns.assign(days.begin(), days.end());
      g.total_rows = ranked.size();
      break;
    }
    case GridView::kDailyTopUsersByPolicy: {
      const auto ranked = rank_users(pool, base);
      std::vector<std::string> top;
      for (const auto& [user, n] : paged(ranked, spec)) top.push_back(user);
      Selector among = base;
      among.users = top;
      std::map<std::string, std::size_t> totals;
      for (const Alert* a : pool) {
        if (!top.empty() && selector_matches(*a, among)) ++totals[a->policy_id];
      }
      const auto rows = order_policies(totals, policy_severities(pool));
      g.rows = {total};
      g.rows.insert(g.rows.end(), rows.begin(), rows.end());
      g.columns = {total};
      g.columns.insert(g.columns.end(), top.begin(), top.end());
      g.cells.push_back(top.empty() ? Cell{total, total, 0, {}} : scan(pool, among, total, total));
      for (const std::string& u : top) {
        Selector s = base;
        s.users = {u};
        g.cells.push_back(scan(pool, s, total, u));
      }
      for (const std::string& p : rows) {
        Selector row = among;
        row.policies = {p};
        g.cells.push_back(scan(pool, row, p, total));
        for (const std::string& u : top) {
          Selector s = row;
          s.users = {u};
          g.cells.push_back(scan(pool, s, p, u));
        }
      }
      g.total_rows = ranked.size();
      break;
    }
    case GridView::kTwentyFourHoursByPolicy: {
      std::map<std::string, std::size_t> totals;
      for (const Alert* a : pool) {
        if (selector_matches(*a, base)) ++totals[a->policy_id];
      }
      const auto rows = order_policies(totals, policy_severities(pool));
      g.rows = {total};
      g.rows.insert(g.rows.end(), rows.begin(), rows.end());
      g.columns = {total};
      for (int h = 0; h < 24; ++h) g.columns.push_back(two_digit(h));
      g.cells.push_back(scan(pool, base, total, total));
      for (int h = 0; h < 24; ++h) {
        Selector s = base;
        s.hour = h;
        g.cells.push_back(scan(pool, s, total, two_digit(h)));
      }
      for (const std::string& p : rows) {
        Selector row = base;
        row.policies = {p};
        g.cells.push_back(scan(pool, row, p, total));
        for (int h = 0; h < 24; ++h) {
          Selector s = row;
          s.hour = h;
          g.cells.push_back(scan(pool, s, p, two_digit(h)));
        }
      }
      g.total_rows = rows.size();
      break;
    }
  }
  return g;
}

std::vector<Group> facet(std::span<const Alert> alerts, const ExclusionSet& exclusions,
                         const std::vector<std::string>& alert_ids, FacetAttribute x, FacetAttribute y) {
  const std::set<std::string> wanted(alert_ids.begin(), alert_ids.end());
  std::vector<Group> groups;
  for (const Alert* a : visible_sorted(alerts, exclusions)) {
    if (wanted.count(a->alert_id) == 0) continue;
    const std::string xv = attribute(*a, x), yv = attribute(*a, y);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) { return g.x_value == xv && g.y_value == yv; });
    if (it == groups.end()) {
      groups.push_back({xv, yv, {}});
      it = std::prev(groups.end());
    }
    it->alert_ids.push_back(a->alert_id);
  }
  if (groups.empty()) throw Error(ErrorCode::kEmptySelection, "the selection contains no visible alerts");
  auto key_less = [](FacetAttribute attr, const std::string& a, const std::string& b) {
    return numeric(attr) ? std::stoll(a) < std::stoll(b) : a < b;
  };
  std::sort(groups.begin(), groups.end(), [&](const Group& a, const Group& b) {
    if (a.x_value != b.x_value) return key_less(x, a.x_value, b.x_value);
    return key_less(y, a.y_value, b.y_value);
  });
  return groups;
}

}  // namespace alertlens::reference
