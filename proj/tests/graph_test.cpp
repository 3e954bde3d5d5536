#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "alertlens/core/error.hpp"
#include "alertlens/core/json_io.hpp"
#include "alertlens/graph/graph.hpp"
#include "alertlens/store/reference.hpp"
#include "fixtures.hpp"

namespace alertlens {
namespace {

using testing::kDay0;
using testing::make_alert;

class GraphTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    corpus_ = new synth::Corpus(testing::scenario_corpus());
    store_ = new AlertStore();
    store_->ingest(corpus_->alerts);
  }
  static void TearDownTestSuite() {
    delete store_;
    delete corpus_;
  }
  static const Json& truth(std::string_view kind) { return testing::scenario_truth(*corpus_, kind); }
  static synth::Corpus* corpus_;
  static AlertStore* store_;
};
synth::Corpus* GraphTest::corpus_ = nullptr;
AlertStore* GraphTest::store_ = nullptr;

std::size_t count_nodes(const RelationGraph& g, NodeKind k) {
  return static_cast<std::size_t>(
      std::count_if(g.nodes.begin(), g.nodes.end(), [&](const GraphNode& n) { return n.kind == k; }));
}

std::set<std::string> user_labels(const RelationGraph& g) {
  std::set<std::string> out;
  for (const auto& n : g.nodes) {
    if (n.kind == NodeKind::kUser) out.insert(n.label);
  }
  return out;
}

bool touches_any(const Alert& a, const std::vector<std::string>& members) {
  for (const Event& e : a.events) {
    if (std::find(members.begin(), members.end(), e.resource) != members.end()) return true;
  }
  return false;
}

// Structural invariants plus counts recomputed by a full scan.
void check_graph(const RelationGraph& g, std::span<const Alert> alerts) {
  std::map<std::string, const GraphNode*> by_id;
  std::set<std::string> all_members;
  for (std::size_t k = 0; k < g.nodes.size(); ++k) {
    const GraphNode& n = g.nodes[k];
    EXPECT_TRUE(by_id.emplace(n.id, &n).second) << n.id;
    EXPECT_DOUBLE_EQ(n.size_scale, std::log10(static_cast<double>(n.alert_count) + 1.0));
    if (k > 0) {
      const GraphNode& p = g.nodes[k - 1];
      EXPECT_TRUE(std::tie(p.kind, p.label, p.id) < std::tie(n.kind, n.label, n.id));
    }
    std::size_t want = 0;
    for (const Alert& a : alerts) {
      if (!g.range.contains(a.alert_time)) continue;
      if (n.kind == NodeKind::kUser ? a.events.front().user == n.label : touches_any(a, n.members)) ++want;
    }
    EXPECT_EQ(n.alert_count, want) << n.id;
    if (n.kind == NodeKind::kResource) {
      EXPECT_EQ(n.id, resource_node_id(*std::min_element(n.members.begin(), n.members.end())));
      for (const auto& m : n.members) EXPECT_TRUE(all_members.insert(m).second) << m;
    }
  }
  EXPECT_TRUE(by_id.count(g.seed));
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const GraphEdge& e = g.edges[k];
    ASSERT_TRUE(by_id.count(user_node_id(e.user_id))) << e.user_id;
    ASSERT_TRUE(by_id.count(e.resource_key)) << e.resource_key;
    EXPECT_EQ(by_id[e.resource_key]->kind, NodeKind::kResource);
    if (k > 0) {
      EXPECT_TRUE(std::tie(g.edges[k - 1].user_id, g.edges[k - 1].resource_key) < std::tie(e.user_id, e.resource_key));
    }
    std::size_t want = 0;
    for (const Alert& a : alerts) {
      want += g.range.contains(a.alert_time) && a.events.front().user == e.user_id &&
              touches_any(a, by_id[e.resource_key]->members);
    }
    EXPECT_EQ(e.alert_count, want);
    EXPECT_GT(e.alert_count, 0u);
  }
}

TEST_F(GraphTest, UsbSeedExactVersusPermissive) {
  const Json& t = truth("usb_guid_share");
  const auto snap = store_->snapshot();
  const std::string seed = t.at("seed_resource");
  const RelationGraph exact = build_graph(*snap, seed, SeedKind::kResource, corpus_->range, false);
  EXPECT_EQ(count_nodes(exact, NodeKind::kUser), 1u);
  EXPECT_EQ(count_nodes(exact, NodeKind::kResource), 3u);
  EXPECT_EQ(user_labels(exact), std::set<std::string>{t.at("user").get<std::string>()});
  check_graph(exact, corpus_->alerts);

  const RelationGraph loose = build_graph(*snap, seed, SeedKind::kResource, corpus_->range, true);
  auto users = user_labels(loose);
  std::set<std::string> expected{t.at("user").get<std::string>()};
  for (const auto& u : t.at("other_users")) expected.insert(u.get<std::string>());
  EXPECT_EQ(users, expected);
  const GraphNode* seed_node = loose.find_node(loose.seed);
  ASSERT_NE(seed_node, nullptr);
  for (const auto& d : t.at("descriptors")) {
    EXPECT_NE(std::find(seed_node->members.begin(), seed_node->members.end(), d.get<std::string>()),
              seed_node->members.end());
  }
  for (const auto& d : t.at("other_descriptors")) {
    EXPECT_NE(std::find(seed_node->members.begin(), seed_node->members.end(), d.get<std::string>()),
              seed_node->members.end());
  }
  check_graph(loose, corpus_->alerts);
}

TEST_F(GraphTest, WscriptSeedReachesManifestUsers) {
  const Json& t = truth("wscript_burst");
  const auto snap = store_->snapshot();
  const TimeRange window = t.at("window").get<TimeRange>();
  const RelationGraph loose = build_graph(*snap, t.at("seed_resource").get<std::string>(), SeedKind::kResource, window, true);
  EXPECT_EQ(count_nodes(loose, NodeKind::kUser), t.at("user_count").get<std::size_t>());
  const auto want_users = t.at("users").get<std::set<std::string>>();
  EXPECT_EQ(user_labels(loose), want_users);
  const RelationGraph exact = build_graph(*snap, t.at("seed_resource").get<std::string>(), SeedKind::kResource, window, false);
  EXPECT_EQ(user_labels(exact), t.at("exact_seed_users").get<std::set<std::string>>());
  check_graph(exact, corpus_->alerts);
}

// Permissive matching never loses users or resources.
TEST_F(GraphTest, PermissiveIsMonotone) {
  const auto snap = store_->snapshot();
  for (std::string_view kind : {"usb_guid_share", "wscript_burst", "autosave_file"}) {
    const Json& t = truth(kind);
    const std::string seed = t.contains("seed_resource") ? t.at("seed_resource").get<std::string>() : t.at("file").get<std::string>();
    const RelationGraph a = build_graph(*snap, seed, SeedKind::kResource, corpus_->range, false);
    const RelationGraph b = build_graph(*snap, seed, SeedKind::kResource, corpus_->range, true);
    const auto ua = user_labels(a), ub = user_labels(b);
    EXPECT_TRUE(std::includes(ub.begin(), ub.end(), ua.begin(), ua.end())) << kind;
    std::set<std::string> ma, mb;
    for (const auto& n : a.nodes) ma.insert(n.members.begin(), n.members.end());
    for (const auto& n : b.nodes) mb.insert(n.members.begin(), n.members.end());
    EXPECT_TRUE(std::includes(mb.begin(), mb.end(), ma.begin(), ma.end())) << kind;
  }
}

TEST_F(GraphTest, UserSeedIsBipartiteAndCountsMatchScan) {
  const Json& t = truth("autosave_file");
  const auto snap = store_->snapshot();
  const TimeRange r = t.at("hump_range").get<TimeRange>();
  for (bool permissive : {false, true}) {
    const RelationGraph g = build_graph(*snap, t.at("user").get<std::string>(), SeedKind::kUser, r, permissive);
    EXPECT_EQ(g.seed, user_node_id(t.at("user").get<std::string>()));
    EXPECT_GE(count_nodes(g, NodeKind::kResource), 1u);
    check_graph(g, corpus_->alerts);
  }
}

TEST_F(GraphTest, EdgeAlertsAndNodeHistoryAgreeWithCounts) {
  const Json& t = truth("usb_guid_share");
  const auto snap = store_->snapshot();
  const RelationGraph g = build_graph(*snap, t.at("seed_resource").get<std::string>(), SeedKind::kResource,
                                      corpus_->range, true);
  for (const GraphEdge& e : g.edges) {
    const auto alerts = edge_alerts(*snap, g, e.user_id, e.resource_key);
    EXPECT_EQ(alerts.size(), e.alert_count);
    EXPECT_EQ(fetch_alerts(*snap, e.selection_handle).size(), e.alert_count);
  }
  for (const GraphNode& n : g.nodes) {
    EXPECT_EQ(fetch_alerts(*snap, n.selection_handle).size(), n.alert_count) << n.id;
    const GridResult h = node_history(*snap, g, n.id);
    std::size_t sum = 0;
    for (const auto& c : h.cells) sum += c.alert_count;
    EXPECT_EQ(sum, n.alert_count) << n.id;
  }
}

TEST_F(GraphTest, UnknownNodeAndEdgeAreReported) {
  const auto snap = store_->snapshot();
  const RelationGraph g = build_graph(*snap, truth("usb_guid_share").at("user").get<std::string>(), SeedKind::kUser,
                                      corpus_->range, false);
  try {
    node_history(*snap, g, "u:nobody");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownNode);
  }
  try {
    edge_alerts(*snap, g, "nobody", "r:x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownEdge);
  }
}

TEST(Graph, SeedWithoutAlertsIsSingleNode) {
  AlertStore store;
  store.ingest({make_alert("a", kDay0, "alice", "P1", 1, "C:/x.txt")});
  const auto snap = store.snapshot();
  const TimeRange r{kDay0, kDay0 + kSecondsPerDay};
  const RelationGraph g = build_graph(*snap, "C:/never.txt", SeedKind::kResource, r, false);
  ASSERT_EQ(g.nodes.size(), 1u);
  EXPECT_TRUE(g.edges.empty());
  EXPECT_EQ(g.nodes[0].alert_count, 0u);
  const RelationGraph u = build_graph(*snap, "bob", SeedKind::kUser, r, false);
  ASSERT_EQ(u.nodes.size(), 1u);
  EXPECT_EQ(u.nodes[0].id, "u:bob");
  EXPECT_THROW(build_graph(*snap, "bob", SeedKind::kUser, {r.end, r.start}, false), Error);
}

TEST(Graph, PermissiveFilenameSegmentMerges) {
  AlertStore store;
  store.ingest({make_alert("a", kDay0, "alice", "P1", 1, "C:/Windows/System32/wscript.exe"),
                make_alert("b", kDay0 + 10, "bob", "P1", 1, "D:\\tools\\WScript.exe"),
                make_alert("c", kDay0 + 20, "carol", "P1", 1, "C:/other.txt")});
  const auto snap = store.snapshot();
  const TimeRange r{kDay0, kDay0 + kSecondsPerDay};
  const auto exact = build_graph(*snap, "C:/Windows/System32/wscript.exe", SeedKind::kResource, r, false);
  const auto loose = build_graph(*snap, "C:/Windows/System32/wscript.exe", SeedKind::kResource, r, true);
  EXPECT_EQ(user_labels(exact), (std::set<std::string>{"alice"}));
  EXPECT_EQ(user_labels(loose), (std::set<std::string>{"alice", "bob"}));
  EXPECT_EQ(count_nodes(loose, NodeKind::kResource), 1u);
  const Json j = loose;
  EXPECT_EQ(j.at("nodes").size(), 3u);
  EXPECT_EQ(j.at("edges").size(), 2u);
}

}  // namespace
}  // namespace alertlens
