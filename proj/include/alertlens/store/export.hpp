#pragma once

#include <iosfwd>
#include <span>
#include <string_view>

#include "alertlens/store/store.hpp"

namespace alertlens {

enum class ExportFormat { kJsonl, kCsv };

ExportFormat parse_export_format(std::string_view s);

inline constexpr std::string_view kCsvHeader =
    "user,endpoint,application,resource,resource_type,activity,policy_id,severity,alert_time,event_count";

void write_csv(std::ostream& out, std::span<const Alert> alerts);
void write_jsonl(std::ostream& out, std::span<const Alert> alerts);

void export_alerts(const Snapshot& snap, std::string_view handle, ExportFormat format, std::ostream& out);

}  // namespace alertlens
