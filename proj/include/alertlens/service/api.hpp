#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "alertlens/core/error.hpp"
#include "alertlens/history/history.hpp"
#include "alertlens/store/store.hpp"

namespace alertlens {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_dir = "data";
  std::optional<std::filesystem::path> exclusions_path;  // default: <data_dir>/exclusions.json
  std::optional<std::filesystem::path> static_dir;
  std::string log_level = "info";

  std::filesystem::path alerts_file() const { return data_dir / "alerts.jsonl"; }
  std::filesystem::path exclusions_file() const { return exclusions_path.value_or(data_dir / "exclusions.json"); }
  std::filesystem::path sessions_dir() const { return data_dir / "sessions"; }
};

inline constexpr std::string_view kDataDirEnv = "ALERTLENS_DATA";
inline constexpr std::string_view kSessionHeader = "X-Session-Id";

// Flag value if given, else the environment override, else "data".
std::filesystem::path resolve_data_dir(const std::optional<std::string>& flag);

struct ApiRequest {
  std::string method = "GET";
  std::string path;
  std::map<std::string, std::string> params;
  std::string body;
  std::string session_id;
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::string session_id;  // set when the request touched a session
};

int http_status(ErrorCode code);

// Transport-independent request handling shared by the HTTP server and the
// CLI. Safe to call from many threads.
class Api {
 public:
  // Loads <data_dir>/alerts.jsonl and the exclusion config when present.
  explicit Api(ServiceConfig config);
  Api(ServiceConfig config, std::shared_ptr<AlertStore> store);

  ApiResponse handle(const ApiRequest& request);

  AlertStore& store() { return *store_; }
  const ServiceConfig& config() const { return config_; }

 private:
  struct Session {
    std::mutex mutex;
    HistoryTree tree;
  };

  Json histogram(const ApiRequest& r);
  Json grid(const ApiRequest& r);
  ApiResponse alerts(const ApiRequest& r);
  Json facet(const ApiRequest& r);
  Json graph(const ApiRequest& r);
  Json graph_node(const ApiRequest& r);
  Json graph_edge(const ApiRequest& r);
  ApiResponse export_selection(const ApiRequest& r);
  ApiResponse history(const ApiRequest& r);

  std::shared_ptr<Session> session(std::string& id);
  void persist(const std::string& id, const Session& s) const;
  std::string label_for(const Snapshot& snap, const ExplorationState& state) const;

  ServiceConfig config_;
  std::shared_ptr<AlertStore> store_;
  std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

}  // namespace alertlens
