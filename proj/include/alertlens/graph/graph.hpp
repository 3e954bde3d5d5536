#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "alertlens/store/grid.hpp"

namespace alertlens {

enum class SeedKind { kAuto, kUser, kResource };
enum class NodeKind { kUser, kResource };

SeedKind parse_seed_kind(std::string_view s);

struct GraphNode {
  std::string id;  // "u:<user>" or "r:<representative raw>"
  NodeKind kind = NodeKind::kUser;
  std::string label;
  std::size_t alert_count = 0;
  double size_scale = 0.0;           // log10(alert_count + 1)
  std::vector<std::string> members;  // resource nodes: raw strings in the class
  std::string selection_handle;
};

struct GraphEdge {
  std::string user_id;       // plain user id
  std::string resource_key;  // resource node id
  std::size_t alert_count = 0;
  std::string selection_handle;
};

struct RelationGraph {
  std::vector<GraphNode> nodes;  // sorted by (kind, label, id)
  std::vector<GraphEdge> edges;  // sorted by (user_id, resource_key)
  std::string seed;              // node id
  bool permissive = false;
  TimeRange range;

  const GraphNode* find_node(std::string_view id) const;
  const GraphEdge* find_edge(std::string_view user_id, std::string_view resource_key) const;
};

void to_json(Json& j, const RelationGraph& g);

// Two-hop expansion from a user or resource seed. A seed with no alerts in
// range yields a single-node graph. Throws Error(kRange) on an invalid range.
RelationGraph build_graph(const Snapshot& snap, std::string_view seed, SeedKind kind, TimeRange range,
                          bool permissive);

std::string user_node_id(std::string_view user);
std::string resource_node_id(std::string_view representative);

Selector node_selector(const RelationGraph& g, const GraphNode& node);
Selector edge_selector(const RelationGraph& g, const GraphEdge& edge);

// Throws Error(kUnknownEdge).
std::vector<Alert> edge_alerts(const Snapshot& snap, const RelationGraph& g, std::string_view user_id,
                               std::string_view resource_key);

// Per-day calendar of the node over the graph range. Throws Error(kUnknownNode).
GridResult node_history(const Snapshot& snap, const RelationGraph& g, std::string_view node_id);

}  // namespace alertlens
