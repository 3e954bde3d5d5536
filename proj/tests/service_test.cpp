#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "alertlens/core/error.hpp"
#include "alertlens/core/json_io.hpp"
#include "alertlens/service/api.hpp"
#include "alertlens/service/cli.hpp"
#include "alertlens/service/server.hpp"
#include "alertlens/store/export.hpp"
#include "fixtures.hpp"
#include "httplib.h"

namespace alertlens {
namespace {

namespace fs = std::filesystem;
using testing::kDay0;
using testing::random_alerts;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("alertlens_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_alerts(const fs::path& dir, const std::vector<Alert>& alerts) {
  std::ofstream out(dir / "alerts.jsonl");
  for (const Alert& a : alerts) out << Json(a).dump() << "\n";
}

ApiRequest get(std::string path, std::map<std::string, std::string> params = {}) {
  ApiRequest r;
  r.path = std::move(path);
  r.params = std::move(params);
  return r;
}

ApiRequest post(std::string path, const Json& body, std::string session) {
  ApiRequest r;
  r.method = "POST";
  r.path = std::move(path);
  r.body = body.dump();
  r.session_id = std::move(session);
  return r;
}

class ApiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fresh_dir(::testing::UnitTest::GetInstance()->current_test_info()->name());
    alerts_ = random_alerts(4, 600);
    write_alerts(dir_, alerts_);
    ServiceConfig c;
    c.data_dir = dir_;
    api_ = std::make_unique<Api>(c);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Json ok(const ApiRequest& r) {
    const ApiResponse resp = api_->handle(r);
    EXPECT_EQ(resp.status, 200) << r.path << " " << resp.body;
    return Json::parse(resp.body);
  }
  std::pair<int, std::string> fail(const ApiRequest& r) {
    const ApiResponse resp = api_->handle(r);
    const Json j = Json::parse(resp.body);
    return {resp.status, j.at("error").at("code").get<std::string>()};
  }

  fs::path dir_;
  std::vector<Alert> alerts_;
  std::unique_ptr<Api> api_;
};

TEST_F(ApiTest, HistogramTotalsAllAlerts) {
  const Json j = ok(get("/api/histogram"));
  EXPECT_EQ(j.at("total_alerts"), alerts_.size());
  EXPECT_GE(j.at("weeks").size(), 3u);
}

TEST_F(ApiTest, GridCellsResolveThroughAlertsEndpoint) {
  const Json g = ok(get("/api/grid", {{"view", "DailyTopUsersByPolicy"},
                                      {"start", format_day(day_of(kDay0) + 2)},
                                      {"top_n", "5"}}));
  EXPECT_EQ(g.at("view"), "DailyTopUsersByPolicy");
  ASSERT_FALSE(g.at("cells").empty());
  for (const auto& cell : g.at("cells")) {
    const Json alerts = ok(get("/api/alerts", {{"handle", cell.at("selection_handle")}}));
    EXPECT_EQ(alerts.at("alerts").size(), cell.at("alert_count").get<std::size_t>());
  }
  const Json listed = ok(get("/api/grid", {{"view", "TargetedCalendar"},
                                           {"start", format_day(day_of(kDay0))},
                                           {"end", format_day(day_of(kDay0) + 21)},
                                           {"user", "[\"user1\",\"user2\"]"}}));
  const Json comma = ok(get("/api/grid", {{"view", "TargetedCalendar"},
                                          {"start", format_day(day_of(kDay0))},
                                          {"end", format_day(day_of(kDay0) + 21)},
                                          {"user", "user1,user2"}}));
  EXPECT_EQ(listed, comma);
}

TEST_F(ApiTest, ErrorCodesMapToStatuses) {
  EXPECT_EQ(fail(get("/api/grid", {{"view", "Nope"}})), std::make_pair(400, std::string("spec")));
  EXPECT_EQ(fail(get("/api/grid", {{"view", "Calendar"}, {"start", "2021-03-05"}, {"end", "2021-03-01"}})),
            std::make_pair(400, std::string("range")));
  EXPECT_EQ(fail(get("/api/alerts", {{"handle", "garbage"}})), std::make_pair(404, std::string("handle")));
  EXPECT_EQ(fail(get("/api/nowhere")), std::make_pair(404, std::string("not-found")));
  EXPECT_EQ(fail(get("/api/facet", {{"ids", "nope-1"}})).first, 404);
  EXPECT_EQ(fail(get("/api/graph", {{"seed", "user1"}, {"kind", "user"}, {"start", "x"}})).first, 400);
  EXPECT_EQ(fail(post("/api/history/restore", {{"node_id", 3}}, "")), std::make_pair(404, std::string("unknown-node")));
  EXPECT_EQ(fail(post("/api/history/restore", {{"nope", 3}}, "")).first, 400);
}

TEST_F(ApiTest, StaleHandleIsConflict) {
  const Json g = ok(get("/api/grid", {{"view", "Calendar"}}));
  const std::string h = g.at("cells").at(0).at("selection_handle");
  api_->store().set_exclusions({{}, {"user1"}});
  EXPECT_EQ(fail(get("/api/alerts", {{"handle", h}})), std::make_pair(409, std::string("stale-handle")));
}

TEST_F(ApiTest, FacetGraphAndExportEndpoints) {
  const Json g = ok(get("/api/grid", {{"view", "Calendar"}}));
  std::string handle;
  for (const auto& c : g.at("cells")) {
    if (c.at("alert_count").get<int>() > 0) handle = c.at("selection_handle");
  }
  ASSERT_FALSE(handle.empty());
  const Json f = ok(get("/api/facet", {{"handle", handle}, {"x", "policy"}, {"y", "resource"}, {"color", "alert_time"}}));
  EXPECT_EQ(f.at("color").at("kind"), "continuous");
  EXPECT_EQ(fail(get("/api/facet", {{"handle", handle}, {"x", "user"}, {"y", "user"}})).first, 400);

  const Json graph = ok(get("/api/graph", {{"seed", "user3"}, {"kind", "user"}, {"permissive", "true"}}));
  ASSERT_GE(graph.at("nodes").size(), 2u);
  ASSERT_FALSE(graph.at("edges").empty());
  const Json& e = graph.at("edges").at(0);
  const Json edge = ok(get("/api/graph/edge", {{"seed", "user3"}, {"kind", "user"}, {"permissive", "true"},
                                               {"user", e.at("user")}, {"resource", e.at("resource")}}));
  EXPECT_EQ(edge.at("alerts").size(), e.at("alert_count").get<std::size_t>());
  const Json node = ok(get("/api/graph/node", {{"seed", "user3"}, {"kind", "user"}, {"node", "u:user3"}}));
  EXPECT_EQ(node.at("view"), "SingleUserCalendar");
  EXPECT_EQ(fail(get("/api/graph/node", {{"seed", "user3"}, {"kind", "user"}, {"node", "u:ghost"}})).second,
            "unknown-node");

  const ApiResponse csv = api_->handle(get("/api/export", {{"handle", handle}}));
  EXPECT_EQ(csv.status, 200);
  EXPECT_EQ(csv.content_type.rfind("text/csv", 0), 0u);
  EXPECT_EQ(csv.body.substr(0, csv.body.find('\n')), kCsvHeader);
}

TEST_F(ApiTest, SessionsRecordAndPersist) {
  ExplorationState s;
  s.brush = {kDay0, kDay0 + 7 * kSecondsPerDay};
  const Json g = ok(get("/api/grid", {{"view", "Calendar"}}));
  s.selection_handles = {g.at("cells").at(0).at("selection_handle")};
  const ApiResponse first = api_->handle(post("/api/history/record", Json(s), ""));
  ASSERT_EQ(first.status, 200) << first.body;
  const std::string sid = first.session_id;
  ASSERT_FALSE(sid.empty());
  const Json rec = Json::parse(first.body);
  EXPECT_FALSE(rec.at("label").get<std::string>().empty());
  s.label = "second";
  ok(post("/api/history/record", Json(s), sid));
  ok(post("/api/history/annotate", {{"node_id", 0}, {"text", "first look"}}, sid));
  const Json restored = ok(post("/api/history/restore", {{"node_id", 0}}, sid));
  EXPECT_EQ(restored.at("state").at("brush"), Json(s.brush));

  ServiceConfig c;
  c.data_dir = dir_;
  Api reopened(c);
  ApiRequest r = get("/api/history");
  r.session_id = sid;
  const Json tree = Json::parse(reopened.handle(r).body);
  ASSERT_EQ(tree.at("nodes").size(), 2u);
  EXPECT_EQ(tree.at("cursor"), 0);
  EXPECT_EQ(tree.at("nodes").at(0).at("annotation"), "first look");
  EXPECT_FALSE(tree.at("nodes").at(0).at("state").at("exclusion_epoch").get<std::string>().empty());

  EXPECT_EQ(fail(post("/api/history/record", Json(s), "../../etc")).first, 400);
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int rc = cli::run(std::move(args), out, err);
  if (out_text) *out_text = out.str();
  return rc;
}

// The CLI prints exactly the API body for the same parameters.
TEST_F(ApiTest, CliQueryMatchesApi) {
  const std::string data = dir_.string();
  std::string text;
  ASSERT_EQ(run_cli({"--data", data, "query", "grid", "--view", "HistoricTopUsers", "--top-n", "7"}, &text), 0);
  EXPECT_EQ(Json::parse(text), ok(get("/api/grid", {{"view", "HistoricTopUsers"}, {"top_n", "7"}})));
  ASSERT_EQ(run_cli({"--data", data, "query", "histogram"}, &text), 0);
  EXPECT_EQ(Json::parse(text), ok(get("/api/histogram")));
  ASSERT_EQ(run_cli({"--data", data, "query", "graph", "--seed", "user2", "--kind", "user", "--permissive"}, &text), 0);
  EXPECT_EQ(Json::parse(text), ok(get("/api/graph", {{"seed", "user2"}, {"kind", "user"}, {"permissive", "true"}})));
  EXPECT_EQ(run_cli({"--data", data, "query", "alerts", "--handle", "garbage"}, &text), 2);
  EXPECT_NE(run_cli({"--data", data, "query", "bogus"}), 0);
}

TEST_F(ApiTest, CliCleanWritesExclusionsSeenByApi) {
  const fs::path ex = dir_ / "ex.json";
  std::ofstream(ex) << R"({"excluded_ranges": [], "excluded_users": ["user1"]})";
  ASSERT_EQ(run_cli({"--data", dir_.string(), "clean", "--exclusions", ex.string()}), 0);
  ServiceConfig c;
  c.data_dir = dir_;
  Api reopened(c);
  const Json j = Json::parse(reopened.handle(get("/api/exclusions")).body);
  EXPECT_EQ(j.at("exclusions").at("excluded_users"), Json::array({"user1"}));
  std::size_t visible = 0;
  for (const Alert& a : alerts_) visible += a.events.front().user != "user1";
  EXPECT_EQ(Json::parse(reopened.handle(get("/api/histogram")).body).at("total_alerts"), visible);
  ASSERT_EQ(run_cli({"--data", dir_.string(), "clean", "--clear"}), 0);
}

TEST(Cli, GenerateIsDeterministic) {
  const fs::path a = fresh_dir("gen_a"), b = fresh_dir("gen_b");
  const std::vector<std::string> common{"generate", "--users", "200", "--days", "90", "--target-alerts", "6000",
                                        "--noise-reserve", "0", "--seed", "5", "--scenario", "none", "--out"};
  auto args_a = common, args_b = common;
  args_a.push_back(a.string());
  args_b.push_back(b.string());
  ASSERT_EQ(run_cli(args_a), 0);
  ASSERT_EQ(run_cli(args_b), 0);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  EXPECT_EQ(slurp(a / "alerts.jsonl"), slurp(b / "alerts.jsonl"));
  EXPECT_EQ(slurp(a / "events.jsonl"), slurp(b / "events.jsonl"));
  EXPECT_FALSE(slurp(a / "alerts.jsonl").empty());
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, IngestMergesIdempotently) {
  const fs::path dir = fresh_dir("ingest");
  const fs::path src = dir / "batch.jsonl";
  {
    std::ofstream out(src);
    for (const Alert& a : random_alerts(9, 50)) out << Json(a).dump() << "\n";
  }
  const fs::path data = dir / "data";
  ASSERT_EQ(run_cli({"--data", data.string(), "ingest", src.string()}), 0);
  ASSERT_EQ(run_cli({"--data", data.string(), "ingest", src.string()}), 0);
  ServiceConfig c;
  c.data_dir = data;
  Api api(c);
  EXPECT_EQ(api.store().size(), 50u);
  fs::remove_all(dir);
}

TEST(DataDir, EnvironmentOverride) {
  ::setenv(std::string(kDataDirEnv).c_str(), "/tmp/from-env", 1);
  EXPECT_EQ(resolve_data_dir(std::nullopt), fs::path("/tmp/from-env"));
  EXPECT_EQ(resolve_data_dir(std::string("flag")), fs::path("flag"));
  ::unsetenv(std::string(kDataDirEnv).c_str());
  EXPECT_EQ(resolve_data_dir(std::nullopt), fs::path("data"));
}

TEST(Http, ServesApiOverLoopback) {
  auto store = std::make_shared<AlertStore>();
  store->ingest(random_alerts(6, 200));
  ServiceConfig c;
  c.data_dir = fresh_dir("http");
  Api api(c, store);
  HttpServer server(api);
  const int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread t([&] { server.listen(); });
  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/api/histogram");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(Json::parse(res->body).at("total_alerts"), 200);
  res = client.Get("/api/grid?view=Calendar&start=2021-03-01&end=2021-03-03");
  ASSERT_TRUE(res);
  EXPECT_EQ(Json::parse(res->body).at("cells").size(), 2u);
  res = client.Get("/api/alerts?handle=bad");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
  res = client.Post("/api/history/record", R"({"brush":{"start":"2021-03-01T00:00:00Z","end":"2021-03-02T00:00:00Z"}})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200) << res->body;
  const std::string sid = res->get_header_value(std::string(kSessionHeader));
  EXPECT_FALSE(sid.empty());
  res = client.Get("/api/history", {{std::string(kSessionHeader), sid}});
  ASSERT_TRUE(res);
  EXPECT_EQ(Json::parse(res->body).at("nodes").size(), 1u);
  server.stop();
  t.join();
  fs::remove_all(c.data_dir);
}

}  // namespace
}  // namespace alertlens
