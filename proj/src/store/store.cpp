#include "alertlens/store/store.hpp"

#include <istream>
#include <mutex>
#include <unordered_set>

#include "alertlens/core/error.hpp"
#include "alertlens/store/kernels.hpp"

namespace alertlens {

std::vector<AlertIndex> Snapshot::resolve(const Selector& s) const {
  return kernels::select(*this, kernels::compile(t(), s));
}

std::shared_ptr<const Snapshot> make_snapshot(std::shared_ptr<const AlertTable> table, ExclusionSet exclusions) {
  auto snap = std::make_shared<Snapshot>();
  snap->exclusions = normalize(std::move(exclusions));
  snap->exclusion_fingerprint = fingerprint(snap->exclusions);
  snap->excluded = kernels::exclusion_mask(*table, snap->exclusions);
  snap->table = std::move(table);
  return snap;
}

void to_json(Json& j, const IngestReport& r) {
  Json rejected = Json::array();
  for (const auto& x : r.rejected) rejected.push_back({{"record", x.record}, {"message", x.message}});
  j = Json{{"accepted", r.accepted},
           {"duplicates", r.duplicates},
           {"flagged_invalid", r.flagged_invalid},
           {"rejected", rejected}};
}

AlertStore::AlertStore() : current_(make_snapshot(build_table({}), {})) {}

std::shared_ptr<const Snapshot> AlertStore::snapshot() const {
  std::shared_lock lock(mutex_);
  return current_;
}

IngestReport AlertStore::ingest(std::vector<Alert> alerts) {
  std::unique_lock lock(mutex_);
  IngestReport report;
  const AlertTable& old = current_->t();
  std::unordered_set<std::string> seen;
  std::vector<Alert> fresh;
  std::vector<std::uint8_t> fresh_flags;
  for (std::size_t k = 0; k < alerts.size(); ++k) {
    Alert& a = alerts[k];
    if (old.index_by_id.count(a.alert_id) != 0 || seen.count(a.alert_id) != 0) {
      ++report.duplicates;
      continue;
    }
    auto problems = validate_alert(a);
    bool over_cap_only = !problems.empty();
    for (const auto& p : problems) {
      if (p.find("exceeds") == std::string::npos) over_cap_only = false;
    }
    if (a.alert_id.empty()) problems.push_back("missing alert_id");
    if (!problems.empty() && !over_cap_only) {
      std::string msg = a.alert_id.empty() ? "alert" : a.alert_id;
      msg += ": ";
      for (std::size_t i = 0; i < problems.size(); ++i) msg += (i ? "; " : "") + problems[i];
      report.rejected.push_back({k + 1, msg});
      continue;
    }
    seen.insert(a.alert_id);
    fresh_flags.push_back(over_cap_only ? 1 : 0);
    report.flagged_invalid += over_cap_only ? 1 : 0;
    fresh.push_back(std::move(a));
  }
  report.accepted = fresh.size();
  if (fresh.empty()) return report;

  std::vector<Alert> merged;
  std::vector<std::uint8_t> flags;
  merged.reserve(old.size() + fresh.size());
  merged.insert(merged.end(), old.alerts.begin(), old.alerts.end());
  flags.insert(flags.end(), old.flagged_invalid.begin(), old.flagged_invalid.end());
  merged.insert(merged.end(), std::make_move_iterator(fresh.begin()), std::make_move_iterator(fresh.end()));
  flags.insert(flags.end(), fresh_flags.begin(), fresh_flags.end());
  current_ = make_snapshot(build_table(std::move(merged), std::move(flags)), current_->exclusions);
  return report;
}

IngestReport AlertStore::ingest_jsonl(std::istream& in) {
  std::vector<Alert> alerts;
  std::vector<IngestReport::Rejection> parse_failures;
  std::vector<std::size_t> positions;
  std::string line;
  std::size_t record = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++record;
    try {
      alerts.push_back(parse_alert_line(line));
      positions.push_back(record);
    } catch (const Error& e) {
      parse_failures.push_back({record, e.what()});
    }
  }
  IngestReport report = ingest(std::move(alerts));
  for (auto& r : report.rejected) r.record = positions[r.record - 1];
  report.rejected.insert(report.rejected.end(), parse_failures.begin(), parse_failures.end());
  std::sort(report.rejected.begin(), report.rejected.end(),
            [](const auto& a, const auto& b) { return a.record < b.record; });
  return report;
}

void AlertStore::set_exclusions(ExclusionSet exclusions) {
  auto normalized = normalize(std::move(exclusions));
  std::unique_lock lock(mutex_);
  current_ = make_snapshot(current_->table, std::move(normalized));
}

void to_json(Json& j, const WeekBucket& w) {
  j = Json{{"week_start", format_day(w.week_start)}, {"alert_count", w.alert_count}};
}

std::vector<WeekBucket> weekly_histogram(const Snapshot& snap) {
  const AlertTable& t = snap.t();
  std::vector<WeekBucket> out;
  if (t.size() == 0) return out;
  const DayIndex first = iso_week_start(t.day.front());
  const DayIndex last = iso_week_start(t.day.back());
  const auto weeks = static_cast<std::size_t>((last - first) / 7 + 1);
  Selector all;
  all.range = {t.time.front(), t.time.back() + 1};
  const auto counts = kernels::count_by(snap, kernels::compile(t, all), weeks,
                                        [&](AlertIndex i) { return static_cast<std::size_t>((t.day[i] - first) / 7); });
  out.reserve(weeks);
  for (std::size_t w = 0; w < weeks; ++w) out.push_back({first + static_cast<DayIndex>(7 * w), counts[w]});
  return out;
}

std::vector<Alert> fetch_alerts(const Snapshot& snap, std::string_view handle) {
  const Selector s = decode_handle(handle, snap.exclusion_fingerprint);
  std::vector<Alert> out;
  for (AlertIndex i : snap.resolve(s)) out.push_back(snap.t().alerts[i]);
  return out;
}

}  // namespace alertlens
