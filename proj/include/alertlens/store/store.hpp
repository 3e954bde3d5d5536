#pragma once

#include <iosfwd>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include "alertlens/core/json_io.hpp"
#include "alertlens/store/selector.hpp"
#include "alertlens/store/table.hpp"

namespace alertlens {

// A consistent, immutable view: table plus the exclusions active when it
// was taken. Queries run against snapshots, never against the live store.
struct Snapshot {
  std::shared_ptr<const AlertTable> table;
  ExclusionSet exclusions;  // normalized
  std::string exclusion_fingerprint;
  std::vector<std::uint8_t> excluded;  // per alert

  const AlertTable& t() const { return *table; }
  bool visible(AlertIndex i) const { return excluded[i] == 0; }

  // Visible alert indices matching the selector, ascending.
  std::vector<AlertIndex> resolve(const Selector& s) const;
  std::string handle(const Selector& s) const { return encode_handle(s, exclusion_fingerprint); }
};

struct IngestReport {
  struct Rejection {
    std::size_t record = 0;  // 1-based position in the batch
    std::string message;
  };
  std::size_t accepted = 0;
  std::size_t duplicates = 0;
  std::size_t flagged_invalid = 0;  // accepted but over the per-alert event cap
  std::vector<Rejection> rejected;
};

void to_json(Json& j, const IngestReport& r);

class AlertStore {
 public:
  AlertStore();

  // Batch append; idempotent on alert_id. Over-cap alerts are kept and
  // flagged, every other validation failure rejects the record.
  IngestReport ingest(std::vector<Alert> alerts);
  IngestReport ingest_jsonl(std::istream& in);

  void set_exclusions(ExclusionSet exclusions);

  std::shared_ptr<const Snapshot> snapshot() const;
  std::size_t size() const { return snapshot()->t().size(); }

 private:
  mutable std::shared_mutex mutex_;
  std::shared_ptr<const Snapshot> current_;
};

std::shared_ptr<const Snapshot> make_snapshot(std::shared_ptr<const AlertTable> table, ExclusionSet exclusions);

struct WeekBucket {
  DayIndex week_start = 0;
  std::size_t alert_count = 0;
  bool operator==(const WeekBucket&) const = default;
};

void to_json(Json& j, const WeekBucket& w);

// ISO weeks from the first to the last stored alert, zero weeks included.
std::vector<WeekBucket> weekly_histogram(const Snapshot& snap);

// Alerts behind a handle, in time order.
std::vector<Alert> fetch_alerts(const Snapshot& snap, std::string_view handle);

}  // namespace alertlens
