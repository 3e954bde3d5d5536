#include "alertlens/graph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "alertlens/core/error.hpp"

namespace alertlens {
namespace {

class DisjointSets {
 public:
  std::size_t add() {
    parent_.push_back(parent_.size());
    return parent_.size() - 1;
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

std::vector<std::string> match_keys(const ResourceRef& r) {
  switch (r.kind) {
    case ResourceKind::kFilepath: return {"s:" + r.filename_segment};
    case ResourceKind::kUsbDescriptor: {
      std::vector<std::string> keys;
      for (const auto& g : r.guids) keys.push_back("g:" + g);
      return keys;
    }
    case ResourceKind::kOther: break;
  }
  return {"o:" + r.raw};
}

std::string label_of(const ResourceRef& r) {
  return r.kind == ResourceKind::kFilepath ? r.filename_segment : r.raw;
}

ResourceRef ref_of(std::string_view raw) {
  if (raw.empty()) throw Error(ErrorCode::kInvalidResource, "empty resource seed");
  return parse_resource(raw);
}

struct ResourceClass {
  std::vector<ResourceId> members;  // ascending by raw
};

// Groups resources into match classes. In permissive mode resources sharing
// a match key (filename segment, GUID, raw) join one class; `joined` are
// forced into the same class as each other.
std::vector<ResourceClass> classify(const AlertTable& t, std::vector<ResourceId> resources,
                                    const std::vector<ResourceId>& joined, bool permissive) {
  std::sort(resources.begin(), resources.end());
  resources.erase(std::unique(resources.begin(), resources.end()), resources.end());
  DisjointSets sets;
  std::unordered_map<ResourceId, std::size_t> slot;
  std::unordered_map<std::string, std::size_t> key_slot;
  for (ResourceId r : resources) slot[r] = sets.add();
  if (permissive) {
    for (ResourceId r : resources) {
      for (const auto& k : match_keys(t.resource_refs[r])) {
        auto [it, fresh] = key_slot.emplace(k, slot[r]);
        if (!fresh) sets.unite(it->second, slot[r]);
      }
    }
  }
  for (std::size_t i = 1; i < joined.size(); ++i) sets.unite(slot.at(joined[0]), slot.at(joined[i]));
  std::map<std::size_t, ResourceClass> by_root;
  for (ResourceId r : resources) by_root[sets.find(slot[r])].members.push_back(r);
  std::vector<ResourceClass> out;
  for (auto& [_, c] : by_root) out.push_back(std::move(c));
  return out;
}

class GraphBuilder {
 public:
  GraphBuilder(const Snapshot& snap, TimeRange range, bool permissive) : snap_(snap), t_(snap.t()) {
    graph_.range = range;
    graph_.permissive = permissive;
  }

  RelationGraph from_resource(std::string_view seed) {
    const ResourceRef ref = ref_of(seed);
    const auto seed_matches = t_.matching_resources(ref, graph_.permissive);
    Selector hop1;
    hop1.range = graph_.range;
    hop1.resources = {std::string(seed)};
    hop1.permissive = graph_.permissive;
    const auto a1 = snap_.resolve(hop1);
    if (a1.empty()) return single_node(resource_node_id(seed), NodeKind::kResource, label_of(ref), {std::string(seed)});

    Selector hop2;
    hop2.range = graph_.range;
    hop2.users = users_of(a1);
    const auto a2 = snap_.resolve(hop2);
    std::vector<ResourceId> resources;
    for (AlertIndex i : a2) {
      for (ResourceId r : t_.resources_of(i)) resources.push_back(r);
    }
    std::vector<ResourceId> joined;
    for (ResourceId r : seed_matches) {
      if (std::find(resources.begin(), resources.end(), r) != resources.end()) {
        joined.push_back(r);
      }
    }
    classes_ = classify(t_, resources, joined, graph_.permissive);
    index_classes();
    assemble(a2);
    graph_.seed = resource_node_id(t_.resources[classes_[class_of_.at(joined.front())].members.front()]);
    return finish();
  }

  RelationGraph from_user(std::string_view seed) {
    Selector hop1;
    hop1.range = graph_.range;
    hop1.users = {std::string(seed)};
    const auto a1 = snap_.resolve(hop1);
    if (a1.empty()) return single_node(user_node_id(seed), NodeKind::kUser, std::string(seed), {});

    std::vector<ResourceId> resources;
    for (AlertIndex i : a1) {
      for (ResourceId r : t_.resources_of(i)) resources.push_back(r);
    }
    std::sort(resources.begin(), resources.end());
    resources.erase(std::unique(resources.begin(), resources.end()), resources.end());
    std::vector<ResourceId> expanded = resources;
    if (graph_.permissive) {
      for (ResourceId r : resources) {
        for (ResourceId m : t_.matching_resources(t_.resource_refs[r], true)) expanded.push_back(m);
      }
    }
    Selector hop2;
    hop2.range = graph_.range;
    for (ResourceId r : expanded) hop2.resources.push_back(t_.resources[r]);
    const auto a2 = snap_.resolve(hop2);

    // keep only resources that actually occur in range
    std::vector<std::uint8_t> wanted(t_.resources.size(), 0);
    for (ResourceId r : expanded) wanted[r] = 1;
    std::vector<ResourceId> present;
    for (AlertIndex i : a2) {
      for (ResourceId r : t_.resources_of(i)) {
        if (wanted[r]) present.push_back(r);
      }
    }
    classes_ = classify(t_, present, {}, graph_.permissive);
    index_classes();
    assemble(a2);
    graph_.seed = user_node_id(seed);
    return finish();
  }

 private:
  std::vector<std::string> users_of(const std::vector<AlertIndex>& alerts) const {
    std::vector<UserId> ids;
    for (AlertIndex i : alerts) ids.push_back(t_.user[i]);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::vector<std::string> out;
    for (UserId u : ids) out.push_back(t_.users[u]);
    return out;
  }

  void index_classes() {
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      for (ResourceId r : classes_[c].members) class_of_[r] = c;
    }
  }

  RelationGraph single_node(std::string id, NodeKind kind, std::string label, std::vector<std::string> members) {
    GraphNode node{std::move(id), kind, std::move(label), 0, 0.0, std::move(members), {}};
    graph_.seed = node.id;
    graph_.nodes.push_back(std::move(node));
    graph_.nodes.back().selection_handle = snap_.handle(node_selector(graph_, graph_.nodes.back()));
    return std::move(graph_);
  }

  // Edges from every alert in `alerts`; node counts from the whole range.
  void assemble(const std::vector<AlertIndex>& alerts) {
    std::map<std::pair<UserId, std::size_t>, std::size_t> edges;
    std::vector<std::size_t> touched;
    for (AlertIndex i : alerts) {
      touched.clear();
      for (ResourceId r : t_.resources_of(i)) {
        if (auto it = class_of_.find(r); it != class_of_.end()) touched.push_back(it->second);
      }
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      for (std::size_t c : touched) ++edges[{t_.user[i], c}];
    }
    std::map<UserId, bool> users;
    std::vector<bool> used(classes_.size(), false);
    for (const auto& [key, n] : edges) {
      users[key.first] = true;
      used[key.second] = true;
    }
    class_ids_.resize(classes_.size());
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      class_ids_[c] = resource_node_id(t_.resources[classes_[c].members.front()]);
    }
    for (const auto& [u, _] : users) add_user(u);
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      if (used[c]) add_class(c);
    }
    for (const auto& [key, n] : edges) {
      GraphEdge e{t_.users[key.first], class_ids_[key.second], n, {}};
      e.selection_handle = snap_.handle(edge_selector(graph_, e));
      graph_.edges.push_back(std::move(e));
    }
  }

  std::size_t count_in_range(const std::vector<AlertIndex>& list, std::vector<AlertIndex>* out) const {
    const AlertIndex lo = t_.lower_bound(graph_.range.start);
    const AlertIndex hi = t_.lower_bound(graph_.range.end);
    std::size_t n = 0;
    for (auto it = std::lower_bound(list.begin(), list.end(), lo); it != list.end() && *it < hi; ++it) {
      if (!snap_.visible(*it)) continue;
      ++n;
      if (out) out->push_back(*it);
    }
    return n;
  }

  void add_user(UserId u) {
    GraphNode node{user_node_id(t_.users[u]), NodeKind::kUser, t_.users[u], count_in_range(t_.alerts_by_user[u], nullptr),
                   0.0, {}, {}};
    graph_.nodes.push_back(std::move(node));
  }

  void add_class(std::size_t c) {
    std::vector<AlertIndex> hits;
    GraphNode node;
    node.id = class_ids_[c];
    node.kind = NodeKind::kResource;
    for (ResourceId r : classes_[c].members) {
      node.members.push_back(t_.resources[r]);
      count_in_range(t_.alerts_by_resource[r], &hits);
    }
    std::sort(hits.begin(), hits.end());
    node.alert_count = static_cast<std::size_t>(std::unique(hits.begin(), hits.end()) - hits.begin());
    node.label = label_of(t_.resource_refs[classes_[c].members.front()]);
    graph_.nodes.push_back(std::move(node));
  }

  RelationGraph finish() {
    for (auto& n : graph_.nodes) {
      n.size_scale = std::log10(static_cast<double>(n.alert_count) + 1.0);
      n.selection_handle = snap_.handle(node_selector(graph_, n));
    }
    std::sort(graph_.nodes.begin(), graph_.nodes.end(), [](const GraphNode& a, const GraphNode& b) {
      if (a.kind != b.kind) return a.kind < b.kind;
      if (a.label != b.label) return a.label < b.label;
      return a.id < b.id;
    });
    std::sort(graph_.edges.begin(), graph_.edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
      return a.user_id != b.user_id ? a.user_id < b.user_id : a.resource_key < b.resource_key;
    });
    return std::move(graph_);
  }

  const Snapshot& snap_;
  const AlertTable& t_;
  RelationGraph graph_;
  std::vector<ResourceClass> classes_;
  std::unordered_map<ResourceId, std::size_t> class_of_;
  std::vector<std::string> class_ids_;
};

}  // namespace

SeedKind parse_seed_kind(std::string_view s) {
  if (s.empty() || s == "auto") return SeedKind::kAuto;
  if (s == "user") return SeedKind::kUser;
  if (s == "resource") return SeedKind::kResource;
  throw Error(ErrorCode::kSpec, "seed kind must be user, resource or auto");
}

std::string user_node_id(std::string_view user) { return "u:" + std::string(user); }
std::string resource_node_id(std::string_view representative) { return "r:" + std::string(representative); }

const GraphNode* RelationGraph::find_node(std::string_view id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

const GraphEdge* RelationGraph::find_edge(std::string_view user_id, std::string_view resource_key) const {
  if (user_id.starts_with("u:")) user_id.remove_prefix(2);
  for (const auto& e : edges) {
    if (e.user_id == user_id && e.resource_key == resource_key) return &e;
  }
  return nullptr;
}

RelationGraph build_graph(const Snapshot& snap, std::string_view seed, SeedKind kind, TimeRange range, bool permissive) {
  if (!range.valid()) throw Error(ErrorCode::kRange, "graph range must have start < end");
  if (kind == SeedKind::kAuto) kind = snap.t().find_user(seed) ? SeedKind::kUser : SeedKind::kResource;
  GraphBuilder builder(snap, range, permissive);
  return kind == SeedKind::kUser ? builder.from_user(seed) : builder.from_resource(seed);
}

Selector node_selector(const RelationGraph& g, const GraphNode& node) {
  Selector s;
  s.range = g.range;
  if (node.kind == NodeKind::kUser) {
    s.users = {node.label};
  } else {
    s.resources = node.members;
  }
  return s;
}

Selector edge_selector(const RelationGraph& g, const GraphEdge& edge) {
  Selector s;
  s.range = g.range;
  s.users = {edge.user_id};
  if (const GraphNode* n = g.find_node(edge.resource_key)) s.resources = n->members;
  return s;
}

std::vector<Alert> edge_alerts(const Snapshot& snap, const RelationGraph& g, std::string_view user_id,
                               std::string_view resource_key) {
  const GraphEdge* e = g.find_edge(user_id, resource_key);
  if (e == nullptr) {
    throw Error(ErrorCode::kUnknownEdge, "no edge between " + std::string(user_id) + " and " + std::string(resource_key));
  }
  std::vector<Alert> out;
  for (AlertIndex i : snap.resolve(edge_selector(g, *e))) out.push_back(snap.t().alerts[i]);
  return out;
}

GridResult node_history(const Snapshot& snap, const RelationGraph& g, std::string_view node_id) {
  const GraphNode* n = g.find_node(node_id);
  if (n == nullptr) throw Error(ErrorCode::kUnknownNode, "no node " + std::string(node_id) + " in graph");
  GridSpec spec;
  spec.range = g.range;
  if (n->kind == NodeKind::kUser) {
    spec.view = GridView::kSingleUserCalendar;
    spec.focus_users = {n->label};
  } else {
    spec.view = GridView::kTargetedCalendar;
    spec.focus_resources = n->members;
  }
  return grid(snap, spec);
}

void to_json(Json& j, const RelationGraph& g) {
  Json nodes = Json::array();
  for (const auto& n : g.nodes) {
    Json node{{"id", n.id},
              {"kind", n.kind == NodeKind::kUser ? "user" : "resource"},
              {"label", n.label},
              {"alert_count", n.alert_count},
              {"size_scale", n.size_scale},
              {"selection_handle", n.selection_handle}};
    if (n.kind == NodeKind::kResource) node["members"] = n.members;
    nodes.push_back(std::move(node));
  }
  Json edges = Json::array();
  for (const auto& e : g.edges) {
    edges.push_back({{"user", e.user_id},
                     {"resource", e.resource_key},
                     {"alert_count", e.alert_count},
                     {"selection_handle", e.selection_handle}});
  }
  j = Json{{"nodes", nodes}, {"edges", edges}, {"seed", g.seed}, {"permissive", g.permissive}, {"range", g.range}};
}

}  // namespace alertlens
