#pragma once

// Brute-force full-scan implementations of the store queries. Slow and
// single-threaded; kept as the oracle for tests and as the baseline for
// the kernel benchmark. Shares no code with the indexed store beyond the
// domain types.

#include <span>
#include <string>
#include <vector>

#include "alertlens/store/facet.hpp"
#include "alertlens/store/grid.hpp"

namespace alertlens::reference {

struct Cell {
  std::string row_key;
  std::string col_key;
  std::size_t alert_count = 0;
  std::vector<std::string> alert_ids;  // ordered by (alert_time, alert_id)
};

struct Grid {
  std::vector<std::string> rows;
  std::vector<std::string> columns;
  std::vector<Cell> cells;
  std::size_t total_rows = 0;
};

struct Group {
  std::string x_value;
  std::string y_value;
  std::vector<std::string> alert_ids;
};

bool selector_matches(const Alert& a, const Selector& s);

// Visible alert ids matching s, ordered by (alert_time, alert_id).
std::vector<std::string> select(std::span<const Alert> alerts, const ExclusionSet& exclusions, const Selector& s);

std::vector<WeekBucket> weekly_histogram(std::span<const Alert> alerts, const ExclusionSet& exclusions);

Grid grid(std::span<const Alert> alerts, const ExclusionSet& exclusions, const GridSpec& spec);

std::vector<Group> facet(std::span<const Alert> alerts, const ExclusionSet& exclusions,
                         const std::vector<std::string>& alert_ids, FacetAttribute x, FacetAttribute y);

}  // namespace alertlens::reference
