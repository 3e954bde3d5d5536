#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "alertlens/store/facet.hpp"
#include "alertlens/store/grid.hpp"

namespace alertlens {

// Everything needed to put the console back into a recorded state.
struct ExplorationState {
  TimeRange brush;
  std::vector<GridSpec> grids;
  std::vector<std::string> selection_handles;
  std::optional<FacetSpec> facet;
  std::optional<std::string> graph_seed;
  bool permissive = false;
  std::vector<std::string> policy_filter;
  std::optional<std::string> focus_user;
  std::string exclusion_epoch;
  std::string label;

  bool operator==(const ExplorationState&) const = default;
};

void to_json(Json& j, const ExplorationState& s);
void from_json(const Json& j, ExplorationState& s);

// Label used when a state arrives without one.
std::string fallback_label(const ExplorationState& s);

using NodeId = std::int64_t;

struct HistoryNode {
  NodeId node_id = 0;
  std::optional<NodeId> parent_id;
  ExplorationState state;
  std::optional<std::string> annotation;
  Timestamp created_at = 0;

  bool operator==(const HistoryNode&) const = default;
};

class HistoryTree {
 public:
  using Clock = std::function<Timestamp()>;

  explicit HistoryTree(Clock clock = {});

  // Appends a child of the cursor (the root on an empty tree) and moves
  // the cursor to it.
  NodeId record(ExplorationState state);
  // Throws Error(kUnknownNode).
  ExplorationState restore(NodeId id);
  // Empty text clears. Throws Error(kUnknownNode).
  void annotate(NodeId id, std::string_view text);

  const std::vector<HistoryNode>& nodes() const { return nodes_; }
  std::optional<NodeId> cursor() const { return cursor_; }
  const HistoryNode& node(NodeId id) const;
  std::vector<NodeId> children(NodeId id) const;  // creation order
  std::vector<NodeId> path_to(NodeId id) const;   // root first

  // Description of the first broken invariant, if any.
  std::optional<std::string> check_invariants() const;

  std::string serialize() const;
  // Throws Error(kParse) on corrupt or inconsistent input.
  static HistoryTree load(std::string_view text, Clock clock = {});

  bool operator==(const HistoryTree& o) const { return nodes_ == o.nodes_ && cursor_ == o.cursor_; }

 private:
  void require(NodeId id) const;

  Clock clock_;
  std::vector<HistoryNode> nodes_;  // index == node_id
  std::optional<NodeId> cursor_;
};

}  // namespace alertlens
