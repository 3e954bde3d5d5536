#include "alertlens/history/history.hpp"

#include <chrono>

#include "alertlens/core/error.hpp"

namespace alertlens {
namespace {

Timestamp system_now() {
  return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count();
}

template <typename T>
void put_optional(Json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? Json(*v) : Json(nullptr);
}

template <typename T>
std::optional<T> get_optional(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

void to_json(Json& j, const ExplorationState& s) {
  j = Json{{"brush", s.brush},
           {"grids", s.grids},
           {"selection_handles", s.selection_handles},
           {"permissive", s.permissive},
           {"policy_filter", s.policy_filter},
           {"exclusion_epoch", s.exclusion_epoch},
           {"label", s.label}};
  put_optional(j, "facet", s.facet);
  put_optional(j, "graph_seed", s.graph_seed);
  put_optional(j, "focus_user", s.focus_user);
}

void from_json(const Json& j, ExplorationState& s) {
  s = ExplorationState{};
  if (j.contains("brush")) s.brush = j.at("brush").get<TimeRange>();
  if (j.contains("grids")) s.grids = j.at("grids").get<std::vector<GridSpec>>();
  if (j.contains("selection_handles")) s.selection_handles = j.at("selection_handles").get<std::vector<std::string>>();
  s.facet = get_optional<FacetSpec>(j, "facet");
  s.graph_seed = get_optional<std::string>(j, "graph_seed");
  if (j.contains("permissive")) s.permissive = j.at("permissive").get<bool>();
  if (j.contains("policy_filter")) s.policy_filter = j.at("policy_filter").get<std::vector<std::string>>();
  s.focus_user = get_optional<std::string>(j, "focus_user");
  if (j.contains("exclusion_epoch")) s.exclusion_epoch = j.at("exclusion_epoch").get<std::string>();
  if (j.contains("label")) s.label = j.at("label").get<std::string>();
}

std::string fallback_label(const ExplorationState& s) {
  const std::string when = format_timestamp(s.brush.start);
  if (s.focus_user) return *s.focus_user + " " + when;
  if (s.graph_seed) return *s.graph_seed + " " + when;
  return "overview " + when;
}

HistoryTree::HistoryTree(Clock clock) : clock_(clock ? std::move(clock) : Clock(system_now)) {}

NodeId HistoryTree::record(ExplorationState state) {
  if (state.label.empty()) state.label = fallback_label(state);
  HistoryNode node;
  node.node_id = static_cast<NodeId>(nodes_.size());
  node.parent_id = cursor_;
  node.state = std::move(state);
  node.created_at = clock_();
  nodes_.push_back(std::move(node));
  cursor_ = nodes_.back().node_id;
  return *cursor_;
}

void HistoryTree::require(NodeId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size()) {
    throw Error(ErrorCode::kUnknownNode, "no history node " + std::to_string(id));
  }
}

const HistoryNode& HistoryTree::node(NodeId id) const {
  require(id);
  return nodes_[static_cast<std::size_t>(id)];
}

ExplorationState HistoryTree::restore(NodeId id) {
  require(id);
  cursor_ = id;
  return nodes_[static_cast<std::size_t>(id)].state;
}

void HistoryTree::annotate(NodeId id, std::string_view text) {
  require(id);
  auto& a = nodes_[static_cast<std::size_t>(id)].annotation;
  if (text.empty()) {
    a.reset();
  } else {
    a = std::string(text);
  }
}

std::vector<NodeId> HistoryTree::children(NodeId id) const {
  require(id);
  std::vector<NodeId> out;
  for (const auto& n : nodes_) {
    if (n.parent_id == id) out.push_back(n.node_id);
  }
  return out;
}

std::vector<NodeId> HistoryTree::path_to(NodeId id) const {
  require(id);
  std::vector<NodeId> path;
  for (std::optional<NodeId> at = id; at; at = nodes_[static_cast<std::size_t>(*at)].parent_id) path.push_back(*at);
  return {path.rbegin(), path.rend()};
}

std::optional<std::string> HistoryTree::check_invariants() const {
  if (nodes_.empty()) {
    if (cursor_) return "cursor set on an empty tree";
    return std::nullopt;
  }
  std::size_t roots = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (n.node_id != static_cast<NodeId>(i)) return "node ids are not sequential at " + std::to_string(i);
    if (!n.parent_id) {
      ++roots;
    } else if (*n.parent_id < 0 || *n.parent_id >= n.node_id) {
      // parents always precede children, which also rules out cycles
      return "node " + std::to_string(i) + " has an invalid parent";
    }
    if (n.state.label.empty()) return "node " + std::to_string(i) + " has an empty label";
  }
  if (roots != 1) return "tree has " + std::to_string(roots) + " roots";
  if (!cursor_ || *cursor_ < 0 || static_cast<std::size_t>(*cursor_) >= nodes_.size()) return "cursor is not a node";
  return std::nullopt;
}

std::string HistoryTree::serialize() const {
  Json nodes = Json::array();
  for (const auto& n : nodes_) {
    Json node{{"node_id", n.node_id}, {"state", n.state}, {"created_at", n.created_at}};
    put_optional(node, "parent_id", n.parent_id);
    put_optional(node, "annotation", n.annotation);
    nodes.push_back(std::move(node));
  }
  Json j{{"nodes", nodes}};
  put_optional(j, "cursor", cursor_);
  return j.dump();
}

HistoryTree HistoryTree::load(std::string_view text, Clock clock) {
  HistoryTree tree(std::move(clock));
  try {
    const Json j = Json::parse(text);
    for (const auto& item : j.at("nodes")) {
      HistoryNode n;
      n.node_id = item.at("node_id").get<NodeId>();
      n.parent_id = get_optional<NodeId>(item, "parent_id");
      n.state = item.at("state").get<ExplorationState>();
      n.annotation = get_optional<std::string>(item, "annotation");
      n.created_at = item.at("created_at").get<Timestamp>();
      tree.nodes_.push_back(std::move(n));
    }
    tree.cursor_ = get_optional<NodeId>(j, "cursor");
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, std::string("corrupt history: ") + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kParse, std::string("corrupt history: ") + e.what());
  }
  if (auto broken = tree.check_invariants()) throw Error(ErrorCode::kParse, "corrupt history: " + *broken);
  return tree;
}

}  // namespace alertlens
