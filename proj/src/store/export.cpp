#include "alertlens/store/export.hpp"

#include <ostream>

#include "alertlens/core/error.hpp"

namespace alertlens {
namespace {

void csv_field(std::ostream& out, std::string_view v) {
  if (v.find_first_of(",\"\r\n") == std::string_view::npos) {
    out << v;
    return;
  }
  out << '"';
  for (char c : v) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

ExportFormat parse_export_format(std::string_view s) {
  if (s == "jsonl") return ExportFormat::kJsonl;
  if (s == "csv") return ExportFormat::kCsv;
  throw Error(ErrorCode::kSpec, "unknown export format '" + std::string(s) + "'");
}

void write_csv(std::ostream& out, std::span<const Alert> alerts) {
  out << kCsvHeader << '\n';
  for (const Alert& a : alerts) {
    static const Event kNone{};
    const Event& e = a.events.empty() ? kNone : a.events.front();
    for (std::string_view v : {std::string_view(e.user), std::string_view(e.endpoint), std::string_view(e.application),
                               std::string_view(e.resource), to_string(e.resource_type), to_string(e.activity),
                               std::string_view(a.policy_id)}) {
      csv_field(out, v);
      out << ',';
    }
    out << a.severity << ',' << format_timestamp(a.alert_time) << ',' << a.events.size() << '\n';
  }
}

void write_jsonl(std::ostream& out, std::span<const Alert> alerts) {
  for (const Alert& a : alerts) write_alert_line(out, a);
}

void export_alerts(const Snapshot& snap, std::string_view handle, ExportFormat format, std::ostream& out) {
  const auto alerts = fetch_alerts(snap, handle);
  if (format == ExportFormat::kCsv) {
    write_csv(out, alerts);
  } else {
    write_jsonl(out, alerts);
  }
}

}  // namespace alertlens
