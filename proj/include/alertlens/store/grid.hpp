#pragma once

#include <optional>
#include <string>
#include <vector>

#include "alertlens/store/store.hpp"

namespace alertlens {

enum class GridView {
  kCalendar,
  kDailyTopUsers,
  kHistoricTopUsers,
  kSingleUserCalendar,
  kDailyTopUsersByPolicy,
  kTwentyFourHoursByPolicy,
  kTargetedCalendar,
};

std::string_view to_string(GridView v);
GridView parse_grid_view(std::string_view s);
bool is_single_day(GridView v);

struct GridSpec {
  GridView view = GridView::kCalendar;
  TimeRange range;
  std::vector<std::string> focus_users;
  std::vector<std::string> focus_resources;
  std::vector<std::string> policy_filter;
  std::optional<std::size_t> top_n;
  std::size_t offset = 0;
  bool permissive = false;  // resource matching for TargetedCalendar

  bool operator==(const GridSpec&) const = default;
};

void to_json(Json& j, const GridSpec& s);
void from_json(const Json& j, GridSpec& s);

// Throws Error(kSpec) or Error(kRange) when the spec cannot be run.
void validate(const GridSpec& s);
std::size_t effective_top_n(const GridSpec& s);

inline constexpr std::string_view kTotalKey = "__total__";

struct GridCell {
  std::string row_key;
  std::string col_key;
  std::size_t alert_count = 0;
  std::string selection_handle;

  bool operator==(const GridCell&) const = default;
};

struct GridResult {
  GridView view = GridView::kCalendar;
  TimeRange range;
  std::vector<std::string> rows;
  std::vector<std::string> columns;
  std::vector<GridCell> cells;
  std::string ordering;
  std::size_t total_rows = 0;  // ranked entries before top_n/offset paging
};

void to_json(Json& j, const GridResult& r);

// Cell layout:
//   Calendar, TargetedCalendar: row = day, col = "all" / "targeted"
//   SingleUserCalendar:         row = day, col = user
//   DailyTopUsers:              row = user, col = day
//   HistoricTopUsers:           row = user, col = day
//   DailyTopUsersByPolicy:      row = policy, col = user, plus totals
//   TwentyFourHoursByPolicy:    row = policy, col = hour "00".."23", plus totals
GridResult grid(const Snapshot& snap, const GridSpec& spec);

}  // namespace alertlens
