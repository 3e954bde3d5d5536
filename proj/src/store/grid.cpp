#include "alertlens/store/grid.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <numeric>

#include "alertlens/core/error.hpp"
#include "alertlens/store/kernels.hpp"

namespace alertlens {
namespace {

constexpr std::array<std::pair<GridView, std::string_view>, 7> kViewNames{{
    {GridView::kCalendar, "Calendar"},
    {GridView::kDailyTopUsers, "DailyTopUsers"},
    {GridView::kHistoricTopUsers, "HistoricTopUsers"},
    {GridView::kSingleUserCalendar, "SingleUserCalendar"},
    {GridView::kDailyTopUsersByPolicy, "DailyTopUsersByPolicy"},
    {GridView::kTwentyFourHoursByPolicy, "TwentyFourHoursByPolicy"},
    {GridView::kTargetedCalendar, "TargetedCalendar"},
}};

std::string hour_key(int h) {
  char buf[4];
  std::snprintf(buf, sizeof buf, "%02d", h);
  return buf;
}

TimeRange clip_to_day(const TimeRange& r, DayIndex d) {
  return {std::max(r.start, day_start(d)), std::min(r.end, day_start(d + 1))};
}

class GridBuilder {
 public:
  GridBuilder(const Snapshot& snap, const GridSpec& spec) : snap_(snap), t_(snap.t()), spec_(spec) {
    base_.range = spec.range;
    base_.policies = spec.policy_filter;
    result_.view = spec.view;
    result_.range = spec.range;
  }

  GridResult run() {
    switch (spec_.view) {
      case GridView::kCalendar: calendar(base_, "all"); break;
      case GridView::kSingleUserCalendar: {
        Selector s = base_;
        s.users = spec_.focus_users;
        calendar(s, spec_.focus_users.front());
        break;
      }
      case GridView::kTargetedCalendar: {
        Selector s = base_;
        s.users = spec_.focus_users;
        s.resources = spec_.focus_resources;
        s.permissive = spec_.permissive;
        calendar(s, "targeted");
        break;
      }
      case GridView::kDailyTopUsers: daily_top_users(); break;
      case GridView::kHistoricTopUsers: historic_top_users(); break;
      case GridView::kDailyTopUsersByPolicy: daily_top_users_by_policy(); break;
      case GridView::kTwentyFourHoursByPolicy: hours_by_policy(); break;
    }
    return std::move(result_);
  }

 private:
  void add(std::string row, std::string col, std::size_t count, const Selector& s) {
    result_.cells.push_back({std::move(row), std::move(col), count, snap_.handle(s)});
  }

  std::pair<std::size_t, std::size_t> page(std::size_t n) const {
    const std::size_t lo = std::min(spec_.offset, n);
    const std::size_t hi = std::min(n, lo + effective_top_n(spec_));
    return {lo, hi};
  }

  void calendar(const Selector& s, const std::string& col) {
    const DayIndex first = day_of(spec_.range.start);
    const DayIndex last = day_of(spec_.range.end - 1);
    const auto days = static_cast<std::size_t>(last - first + 1);
    const auto counts = kernels::count_by(snap_, kernels::compile(t_, s), days,
                                          [&](AlertIndex i) { return static_cast<std::size_t>(t_.day[i] - first); });
    result_.columns = {col};
    for (std::size_t k = 0; k < days; ++k) {
      const DayIndex d = first + static_cast<DayIndex>(k);
      Selector cell = s;
      cell.range = clip_to_day(spec_.range, d);
      result_.rows.push_back(format_day(d));
      add(format_day(d), col, counts[k], cell);
    }
    result_.ordering = "day ascending";
    result_.total_rows = days;
  }

  // Users with at least one alert under s, ranked by count desc, id asc.
  std::vector<std::pair<UserId, std::size_t>> ranked_users(const Selector& s) const {
    const auto counts = kernels::count_by(snap_, kernels::compile(t_, s), t_.users.size(),
                                          [&](AlertIndex i) { return static_cast<std::size_t>(t_.user[i]); });
    std::vector<std::pair<UserId, std::size_t>> ranked;
    for (std::size_t u = 0; u < counts.size(); ++u) {
      if (counts[u] > 0) ranked.emplace_back(static_cast<UserId>(u), counts[u]);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    return ranked;
  }

  void daily_top_users() {
    const std::string day = format_day(day_of(spec_.range.start));
    const auto ranked = ranked_users(base_);
    const auto [lo, hi] = page(ranked.size());
    result_.columns = {day};
    for (std::size_t k = lo; k < hi; ++k) {
      const std::string& user = t_.users[ranked[k].first];
      Selector cell = base_;
      cell.users = {user};
      result_.rows.push_back(user);
      add(user, day, ranked[k].second, cell);
    }
    result_.ordering = "alert_count descending, user ascending";
    result_.total_rows = ranked.size();
  }

  void historic_top_users() {
    const DayIndex first = day_of(spec_.range.start);
    const DayIndex last = day_of(spec_.range.end - 1);
    const auto days = static_cast<std::uint64_t>(last - first + 1);
    auto keys = kernels::map_select<std::uint64_t>(snap_, kernels::compile(t_, base_), [&](AlertIndex i) {
      return static_cast<std::uint64_t>(t_.user[i]) * days + static_cast<std::uint64_t>(t_.day[i] - first);
    });
    std::sort(keys.begin(), keys.end());
    struct Entry {
      std::uint64_t key;
      std::size_t count;
    };
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < keys.size();) {
      std::size_t j = i;
      while (j < keys.size() && keys[j] == keys[i]) ++j;
      entries.push_back({keys[i], j - i});
      i = j;
    }
    // key order is (user, day), so a stable sort by count keeps the tie-break
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.count > b.count; });
    const auto [lo, hi] = page(entries.size());
    std::vector<DayIndex> seen_days;
    for (std::size_t k = lo; k < hi; ++k) {
      const std::string& user = t_.users[entries[k].key / days];
      const DayIndex d = first + static_cast<DayIndex>(entries[k].key % days);
      Selector cell = base_;
      cell.users = {user};
      cell.range = clip_to_day(spec_.range, d);
      if (std::find(result_.rows.begin(), result_.rows.end(), user) == result_.rows.end()) result_.rows.push_back(user);
      seen_days.push_back(d);
      add(user, format_day(d), entries[k].count, cell);
    }
    std::sort(seen_days.begin(), seen_days.end());
    seen_days.erase(std::unique(seen_days.begin(), seen_days.end()), seen_days.end());
    for (DayIndex d : seen_days) result_.columns.push_back(format_day(d));
    result_.ordering = "alert_count descending, user ascending, day ascending";
    result_.total_rows = entries.size();
  }

  // Rows of a by-policy matrix: severity desc, row total desc, policy id asc.
  std::vector<PolicyIndex> policy_rows(const std::vector<std::size_t>& row_totals) const {
    std::vector<PolicyIndex> rows;
    for (std::size_t p = 0; p < row_totals.size(); ++p) {
      if (row_totals[p] > 0) rows.push_back(static_cast<PolicyIndex>(p));
    }
    std::sort(rows.begin(), rows.end(), [&](PolicyIndex a, PolicyIndex b) {
      if (t_.policy_severity[a] != t_.policy_severity[b]) return t_.policy_severity[a] > t_.policy_severity[b];
      if (row_totals[a] != row_totals[b]) return row_totals[a] > row_totals[b];
      return a < b;
    });
    return rows;
  }

  void daily_top_users_by_policy() {
    const auto ranked = ranked_users(base_);
    const auto [lo, hi] = page(ranked.size());
    const std::size_t k_users = hi - lo;
    std::vector<std::string> top;
    std::vector<std::size_t> column_of(t_.users.size(), kernels::kSkip);
    for (std::size_t k = lo; k < hi; ++k) {
      column_of[ranked[k].first] = k - lo;
      top.push_back(t_.users[ranked[k].first]);
    }
    Selector among = base_;
    among.users = top;
    if (top.empty()) among.range.end = among.range.start;  // nothing, rather than everyone
    const std::size_t np = t_.policies.size();
    std::vector<std::size_t> counts;
    if (k_users > 0) {
      counts = kernels::count_by(snap_, kernels::compile(t_, among), np * k_users, [&](AlertIndex i) {
        const std::size_t c = column_of[t_.user[i]];
        return c == kernels::kSkip ? kernels::kSkip : t_.policy[i] * k_users + c;
      });
    }
    std::vector<std::size_t> row_totals(np, 0), col_totals(k_users, 0);
    std::size_t grand = 0;
    for (std::size_t p = 0; p < np; ++p) {
      for (std::size_t c = 0; c < k_users; ++c) {
        const std::size_t v = counts[p * k_users + c];
        row_totals[p] += v;
        col_totals[c] += v;
        grand += v;
      }
    }
    const auto rows = policy_rows(row_totals);
    const std::string total(kTotalKey);
    result_.rows.push_back(total);
    for (PolicyIndex p : rows) result_.rows.push_back(t_.policies[p]);
    result_.columns.push_back(total);
    result_.columns.insert(result_.columns.end(), top.begin(), top.end());

    add(total, total, grand, among);
    for (std::size_t c = 0; c < k_users; ++c) {
      Selector s = base_;
      s.users = {top[c]};
      add(total, top[c], col_totals[c], s);
    }
    for (PolicyIndex p : rows) {
      Selector row = among;
      row.policies = {t_.policies[p]};
      add(t_.policies[p], total, row_totals[p], row);
      for (std::size_t c = 0; c < k_users; ++c) {
        Selector s = row;
        s.users = {top[c]};
        add(t_.policies[p], top[c], counts[p * k_users + c], s);
      }
    }
    result_.ordering = "rows: severity descending, alert_count descending; columns: alert_count descending, user ascending";
    result_.total_rows = ranked.size();
  }

  void hours_by_policy() {
    const std::size_t np = t_.policies.size();
    const auto counts = kernels::count_by(snap_, kernels::compile(t_, base_), np * 24,
                                          [&](AlertIndex i) { return t_.policy[i] * 24 + t_.hour[i]; });
    std::vector<std::size_t> row_totals(np, 0), col_totals(24, 0);
    std::size_t grand = 0;
    for (std::size_t p = 0; p < np; ++p) {
      for (std::size_t h = 0; h < 24; ++h) {
        row_totals[p] += counts[p * 24 + h];
        col_totals[h] += counts[p * 24 + h];
        grand += counts[p * 24 + h];
      }
    }
    const auto rows = policy_rows(row_totals);
    const std::string total(kTotalKey);
    result_.rows.push_back(total);
    for (PolicyIndex p : rows) result_.rows.push_back(t_.policies[p]);
    result_.columns.push_back(total);
    for (int h = 0; h < 24; ++h) result_.columns.push_back(hour_key(h));

    add(total, total, grand, base_);
    for (int h = 0; h < 24; ++h) {
      Selector s = base_;
      s.hour = h;
      add(total, hour_key(h), col_totals[static_cast<std::size_t>(h)], s);
    }
    for (PolicyIndex p : rows) {
      Selector row = base_;
      row.policies = {t_.policies[p]};
      add(t_.policies[p], total, row_totals[p], row);
      for (int h = 0; h < 24; ++h) {
        Selector s = row;
        s.hour = h;
        add(t_.policies[p], hour_key(h), counts[p * 24 + static_cast<std::size_t>(h)], s);
      }
    }
    result_.ordering = "rows: severity descending, alert_count descending; columns: hour ascending";
    result_.total_rows = rows.size();
  }

  const Snapshot& snap_;
  const AlertTable& t_;
  const GridSpec& spec_;
  Selector base_;
  GridResult result_;
};

}  // namespace

std::string_view to_string(GridView v) {
  for (const auto& [view, name] : kViewNames) {
    if (view == v) return name;
  }
  return "?";
}

GridView parse_grid_view(std::string_view s) {
  for (const auto& [view, name] : kViewNames) {
    if (name == s) return view;
  }
  if (s == "24HoursByPolicy") return GridView::kTwentyFourHoursByPolicy;
  throw Error(ErrorCode::kSpec, "unknown grid view '" + std::string(s) + "'");
}

bool is_single_day(GridView v) {
  return v == GridView::kDailyTopUsers || v == GridView::kDailyTopUsersByPolicy ||
         v == GridView::kTwentyFourHoursByPolicy;
}

std::size_t effective_top_n(const GridSpec& s) {
  if (s.top_n) return *s.top_n;
  switch (s.view) {
    case GridView::kDailyTopUsers: return 300;
    case GridView::kDailyTopUsersByPolicy: return 50;
    case GridView::kHistoricTopUsers: return 100;
    default: return std::numeric_limits<std::size_t>::max();
  }
}

void validate(const GridSpec& s) {
  if (!s.range.valid()) throw Error(ErrorCode::kRange, "grid range must have start < end");
  if (is_single_day(s.view) &&
      (s.range.end - s.range.start != kSecondsPerDay || day_start(day_of(s.range.start)) != s.range.start)) {
    throw Error(ErrorCode::kSpec, std::string(to_string(s.view)) + " needs a single whole-day range");
  }
  if (s.view == GridView::kSingleUserCalendar && s.focus_users.size() != 1) {
    throw Error(ErrorCode::kSpec, "SingleUserCalendar needs exactly one focus user");
  }
  if (s.view == GridView::kTargetedCalendar && s.focus_users.empty() && s.focus_resources.empty()) {
    throw Error(ErrorCode::kSpec, "TargetedCalendar needs focus users or focus resources");
  }
  if (s.top_n && *s.top_n == 0) throw Error(ErrorCode::kSpec, "top_n must be positive");
}

GridResult grid(const Snapshot& snap, const GridSpec& spec) {
  validate(spec);
  return GridBuilder(snap, spec).run();
}

void to_json(Json& j, const GridSpec& s) {
  j = Json{{"view", to_string(s.view)},
           {"range", s.range},
           {"focus_users", s.focus_users},
           {"focus_resources", s.focus_resources},
           {"policy_filter", s.policy_filter},
           {"offset", s.offset},
           {"permissive", s.permissive}};
  if (s.top_n) j["top_n"] = *s.top_n;
}

void from_json(const Json& j, GridSpec& s) {
  s = GridSpec{};
  s.view = parse_grid_view(j.at("view").get<std::string>());
  s.range = j.at("range").get<TimeRange>();
  if (j.contains("focus_users")) s.focus_users = j.at("focus_users").get<std::vector<std::string>>();
  if (j.contains("focus_resources")) s.focus_resources = j.at("focus_resources").get<std::vector<std::string>>();
  if (j.contains("policy_filter")) s.policy_filter = j.at("policy_filter").get<std::vector<std::string>>();
  if (j.contains("top_n") && !j.at("top_n").is_null()) s.top_n = j.at("top_n").get<std::size_t>();
  if (j.contains("offset")) s.offset = j.at("offset").get<std::size_t>();
  if (j.contains("permissive")) s.permissive = j.at("permissive").get<bool>();
}

void to_json(Json& j, const GridResult& r) {
  Json cells = Json::array();
  for (const auto& c : r.cells) {
    cells.push_back({{"row_key", c.row_key},
                     {"col_key", c.col_key},
                     {"alert_count", c.alert_count},
                     {"selection_handle", c.selection_handle}});
  }
  j = Json{{"view", to_string(r.view)},
           {"range", r.range},
           {"rows", r.rows},
           {"columns", r.columns},
           {"cells", cells},
           {"ordering", r.ordering},
           {"total_rows", r.total_rows}};
}

}  // namespace alertlens
