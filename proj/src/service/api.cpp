#include "alertlens/service/api.hpp"

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "alertlens/core/error.hpp"
#include "alertlens/core/hash.hpp"
#include "alertlens/graph/graph.hpp"
#include "alertlens/store/export.hpp"
#include "alertlens/store/facet.hpp"
#include "alertlens/store/grid.hpp"

namespace alertlens {
namespace {

using Params = std::map<std::string, std::string>;

std::optional<std::string> param(const Params& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

std::string required(const Params& p, const std::string& key) {
  auto v = param(p, key);
  if (!v) throw Error(ErrorCode::kSpec, "missing parameter '" + key + "'");
  return *v;
}

// JSON array, or a comma separated list.
std::vector<std::string> list_param(const Params& p, const std::string& key) {
  std::vector<std::string> out;
  auto v = param(p, key);
  if (!v) return out;
  if (v->front() == '[') {
    try {
      return Json::parse(*v).get<std::vector<std::string>>();
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kParse, "parameter '" + key + "' is not a JSON string array");
    }
  }
  std::stringstream ss(*v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool bool_param(const Params& p, const std::string& key) {
  auto v = param(p, key);
  return v && (*v == "true" || *v == "1" || *v == "yes");
}

std::optional<std::size_t> size_param(const Params& p, const std::string& key) {
  auto v = param(p, key);
  if (!v) return std::nullopt;
  try {
    std::size_t used = 0;
    const long long n = std::stoll(*v, &used);
    if (used != v->size() || n < 0) throw std::invalid_argument(*v);
    return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kSpec, "parameter '" + key + "' must be a non-negative integer");
  }
}

// Full stored range rounded out to whole days, if the store has alerts.
std::optional<TimeRange> stored_days(const Snapshot& snap) {
  const AlertTable& t = snap.t();
  if (t.size() == 0) return std::nullopt;
  return TimeRange{day_start(t.day.front()), day_start(t.day.back() + 1)};
}

TimeRange range_param(const Params& p, const Snapshot& snap) {
  auto start = param(p, "start");
  auto end = param(p, "end");
  const auto stored = stored_days(snap);
  TimeRange r;
  r.start = start ? parse_timestamp(*start) : stored ? stored->start : 0;
  r.end = end ? parse_timestamp(*end) : stored ? stored->end : r.start + kSecondsPerDay;
  if (!r.valid()) throw Error(ErrorCode::kRange, "range must have start < end");
  return r;
}

Json alerts_json(const std::vector<Alert>& alerts) {
  return Json{{"count", alerts.size()}, {"alerts", alerts}};
}

ApiResponse json_response(const Json& j) { return {200, "application/json", j.dump(), {}}; }

std::string new_session_id() {
  static std::mutex m;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(m);
  return to_hex(rng());
}

void check_session_id(const std::string& id) {
  if (id.size() > 64) throw Error(ErrorCode::kSpec, "session id too long");
  for (char c : id) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') {
      throw Error(ErrorCode::kSpec, "session id may only contain letters, digits, '-' and '_'");
    }
  }
}

Json parse_body(const std::string& body) {
  try {
    return body.empty() ? Json::object() : Json::parse(body);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kParse, std::string("request body is not JSON: ") + e.what());
  }
}

}  // namespace

std::filesystem::path resolve_data_dir(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv(std::string(kDataDirEnv).c_str()); env && *env) return env;
  return "data";
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kHandle:
    case ErrorCode::kUnknownNode:
    case ErrorCode::kUnknownEdge: return 404;
    case ErrorCode::kStaleHandle: return 409;
    case ErrorCode::kIo: return 500;
    default: return 400;
  }
}

Api::Api(ServiceConfig config) : Api(std::move(config), std::make_shared<AlertStore>()) {
  if (std::filesystem::exists(config_.alerts_file())) {
    std::ifstream in(config_.alerts_file());
    store_->ingest_jsonl(in);
  }
  if (std::filesystem::exists(config_.exclusions_file())) {
    store_->set_exclusions(parse_exclusions(read_file(config_.exclusions_file().string())));
  }
}

Api::Api(ServiceConfig config, std::shared_ptr<AlertStore> store)
    : config_(std::move(config)), store_(std::move(store)) {}

ApiResponse Api::handle(const ApiRequest& r) {
  try {
    const bool get = r.method == "GET";
    const bool post = r.method == "POST";
    if (r.path == "/api/histogram" && get) return json_response(histogram(r));
    if (r.path == "/api/grid" && get) return json_response(grid(r));
    if (r.path == "/api/alerts" && get) return alerts(r);
    if (r.path == "/api/facet" && get) return json_response(facet(r));
    if (r.path == "/api/graph" && get) return json_response(graph(r));
    if (r.path == "/api/graph/node" && get) return json_response(graph_node(r));
    if (r.path == "/api/graph/edge" && get) return json_response(graph_edge(r));
    if (r.path == "/api/export" && get) return export_selection(r);
    if ((r.path == "/api/history" && get) || (r.path.starts_with("/api/history/") && post)) return history(r);
    if (r.path == "/api/exclusions" && get) {
      auto snap = store_->snapshot();
      return json_response({{"exclusions", snap->exclusions}, {"fingerprint", snap->exclusion_fingerprint}});
    }
    return {404, "application/json",
            Json{{"error", {{"code", "not-found"}, {"message", r.method + " " + r.path + " is not an endpoint"}}}}.dump(),
            {}};
  } catch (const Error& e) {
    return {http_status(e.code()), "application/json",
            Json{{"error", {{"code", to_string(e.code())}, {"message", e.what()}}}}.dump(), r.session_id};
  } catch (const Json::exception& e) {
    return {http_status(ErrorCode::kParse), "application/json",
            Json{{"error", {{"code", to_string(ErrorCode::kParse)}, {"message", e.what()}}}}.dump(), r.session_id};
  } catch (const std::exception& e) {
    return {500, "application/json", Json{{"error", {{"code", "internal"}, {"message", e.what()}}}}.dump(),
            r.session_id};
  }
}

Json Api::histogram(const ApiRequest&) {
  auto snap = store_->snapshot();
  const auto weeks = weekly_histogram(*snap);
  std::size_t total = 0;
  for (const auto& w : weeks) total += w.alert_count;
  return Json{{"weeks", weeks}, {"total_alerts", total}};
}

Json Api::grid(const ApiRequest& r) {
  auto snap = store_->snapshot();
  GridSpec spec;
  spec.view = parse_grid_view(required(r.params, "view"));
  if (is_single_day(spec.view)) {
    DayIndex day = 0;
    if (auto start = param(r.params, "start")) {
      day = day_of(parse_timestamp(*start));
    } else if (snap->t().size() > 0) {
      day = snap->t().day.back();
    }
    spec.range = day_range(day);
    if (auto end = param(r.params, "end")) spec.range.end = parse_timestamp(*end);
  } else {
    spec.range = range_param(r.params, *snap);
  }
  spec.focus_users = list_param(r.params, "user");
  spec.focus_resources = list_param(r.params, "resources");
  spec.policy_filter = list_param(r.params, "policies");
  spec.top_n = size_param(r.params, "top_n");
  spec.offset = size_param(r.params, "offset").value_or(0);
  spec.permissive = bool_param(r.params, "permissive");
  return Json(alertlens::grid(*snap, spec));
}

ApiResponse Api::alerts(const ApiRequest& r) {
  auto snap = store_->snapshot();
  const auto found = fetch_alerts(*snap, required(r.params, "handle"));
  if (param(r.params, "format") == "jsonl") {
    std::ostringstream out;
    write_jsonl(out, found);
    return {200, "application/x-ndjson", out.str(), {}};
  }
  return json_response(alerts_json(found));
}

Json Api::facet(const ApiRequest& r) {
  auto snap = store_->snapshot();
  FacetSpec spec;
  spec.handle = param(r.params, "handle").value_or("");
  spec.alert_ids = list_param(r.params, "ids");
  if (spec.handle.empty() && spec.alert_ids.empty()) throw Error(ErrorCode::kSpec, "facet needs a handle or ids");
  spec.x = parse_facet_attribute(param(r.params, "x").value_or("policy"));
  spec.y = parse_facet_attribute(param(r.params, "y").value_or("user"));
  if (auto c = param(r.params, "color")) spec.color = parse_facet_attribute(*c);
  return Json(alertlens::facet(*snap, spec));
}

Json Api::graph(const ApiRequest& r) {
  auto snap = store_->snapshot();
  return Json(build_graph(*snap, required(r.params, "seed"), parse_seed_kind(param(r.params, "kind").value_or("")),
                          range_param(r.params, *snap), bool_param(r.params, "permissive")));
}

Json Api::graph_node(const ApiRequest& r) {
  auto snap = store_->snapshot();
  const auto g = build_graph(*snap, required(r.params, "seed"), parse_seed_kind(param(r.params, "kind").value_or("")),
                             range_param(r.params, *snap), bool_param(r.params, "permissive"));
  return Json(node_history(*snap, g, required(r.params, "node")));
}

Json Api::graph_edge(const ApiRequest& r) {
  auto snap = store_->snapshot();
  const auto g = build_graph(*snap, required(r.params, "seed"), parse_seed_kind(param(r.params, "kind").value_or("")),
                             range_param(r.params, *snap), bool_param(r.params, "permissive"));
  return alerts_json(edge_alerts(*snap, g, required(r.params, "user"), required(r.params, "resource")));
}

ApiResponse Api::export_selection(const ApiRequest& r) {
  auto snap = store_->snapshot();
  const auto format = parse_export_format(param(r.params, "format").value_or("csv"));
  std::ostringstream out;
  export_alerts(*snap, required(r.params, "handle"), format, out);
  return {200, format == ExportFormat::kCsv ? "text/csv" : "application/x-ndjson", out.str(), {}};
}

std::string Api::label_for(const Snapshot& snap, const ExplorationState& state) const {
  for (const auto& h : state.selection_handles) {
    try {
      const auto ids = snap.resolve(decode_handle(h, snap.exclusion_fingerprint));
      if (ids.empty()) continue;
      const Alert& a = snap.t().alerts[ids.front()];
      return a.events.front().user + " " + format_timestamp(a.alert_time);
    } catch (const Error&) {
      // stale or foreign handle; fall through to the generic label
    }
  }
  return fallback_label(state);
}

std::shared_ptr<Api::Session> Api::session(std::string& id) {
  if (id.empty()) id = new_session_id();
  check_session_id(id);
  std::lock_guard lock(sessions_mutex_);
  auto& slot = sessions_[id];
  if (!slot) {
    slot = std::make_shared<Session>();
    const auto file = config_.sessions_dir() / (id + ".json");
    if (std::filesystem::exists(file)) slot->tree = HistoryTree::load(read_file(file.string()));
  }
  return slot;
}

void Api::persist(const std::string& id, const Session& s) const {
  std::error_code ec;
  std::filesystem::create_directories(config_.sessions_dir(), ec);
  const auto file = config_.sessions_dir() / (id + ".json");
  const auto tmp = config_.sessions_dir() / (id + ".json.tmp");
  write_file(tmp.string(), s.tree.serialize());
  std::filesystem::rename(tmp, file, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot persist session " + id + ": " + ec.message());
}

ApiResponse Api::history(const ApiRequest& r) {
  std::string id = r.session_id;
  auto s = session(id);
  std::lock_guard lock(s->mutex);
  Json out;
  if (r.path == "/api/history") {
    out = Json::parse(s->tree.serialize());
  } else {
    const Json body = parse_body(r.body);
    if (r.path == "/api/history/record") {
      ExplorationState state;
      try {
        state = (body.contains("state") ? body.at("state") : body).get<ExplorationState>();
      } catch (const Error&) {
        throw;
      } catch (const std::exception& e) {
        throw Error(ErrorCode::kParse, std::string("invalid exploration state: ") + e.what());
      }
      auto snap = store_->snapshot();
      if (state.exclusion_epoch.empty()) state.exclusion_epoch = snap->exclusion_fingerprint;
      if (state.label.empty()) state.label = label_for(*snap, state);
      const NodeId node = s->tree.record(std::move(state));
      out = Json{{"node_id", node}, {"label", s->tree.node(node).state.label}, {"cursor", node}};
    } else if (r.path == "/api/history/restore") {
      const NodeId node = body.at("node_id").get<NodeId>();
      out = Json{{"node_id", node}, {"state", s->tree.restore(node)}};
    } else if (r.path == "/api/history/annotate") {
      const NodeId node = body.at("node_id").get<NodeId>();
      s->tree.annotate(node, body.value("text", ""));
      const auto& a = s->tree.node(node).annotation;
      out = Json{{"node_id", node}, {"annotation", a ? Json(*a) : Json(nullptr)}};
    } else {
      throw Error(ErrorCode::kSpec, "unknown history operation " + r.path);
    }
    persist(id, *s);
  }
  ApiResponse resp = json_response(out);
  resp.session_id = id;
  return resp;
}

}  // namespace alertlens
