#include <algorithm>
#include <map>
#include <unordered_map>

#include "alertlens/synth/generator.hpp"

namespace alertlens::synth {

CorpusStats corpus_stats(std::span<const Alert> alerts, const ExclusionSet& exclusions) {
  CorpusStats s;
  std::unordered_map<std::string_view, std::size_t> per_user;
  std::map<DayIndex, std::size_t> per_week;
  std::size_t single = 0;
  for (const auto& a : alerts) {
    if (a.events.empty()) continue;
    const std::string& user = a.events.front().user;
    if (is_excluded(exclusions, user, a.alert_time)) continue;
    ++s.total_alerts;
    ++per_user[user];
    ++per_week[iso_week_start(day_of(a.alert_time))];
    single += a.events.size() == 1 ? 1 : 0;
  }
  s.distinct_alerting_users = per_user.size();
  if (s.total_alerts > 0) {
    s.single_event_fraction = static_cast<double>(single) / static_cast<double>(s.total_alerts);
  }
  std::vector<std::size_t> counts;
  counts.reserve(per_user.size());
  for (const auto& [_, n] : per_user) counts.push_back(n);
  std::sort(counts.begin(), counts.end(), std::greater<>());
  if (!counts.empty()) s.rank1_count = counts[0];
  if (counts.size() >= 100) s.rank100_count = counts[99];
  for (const auto& [week, n] : per_week) {
    s.weekly_totals.push_back({week, n});
    if (s.total_alerts > 0) {
      s.max_week_share = std::max(s.max_week_share, static_cast<double>(n) / static_cast<double>(s.total_alerts));
    }
  }
  return s;
}

void to_json(Json& j, const CorpusStats& s) {
  Json weeks = Json::array();
  for (const auto& w : s.weekly_totals) weeks.push_back({{"week_start", format_day(w.week_start)}, {"alerts", w.alert_count}});
  j = Json{{"total_alerts", s.total_alerts},
           {"distinct_alerting_users", s.distinct_alerting_users},
           {"single_event_fraction", s.single_event_fraction},
           {"rank1_count", s.rank1_count},
           {"rank100_count", s.rank100_count},
           {"rank_ratio", s.rank_ratio()},
           {"max_week_share", s.max_week_share},
           {"weekly_totals", weeks}};
}

}  // namespace alertlens::synth
