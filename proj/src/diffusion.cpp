#include "linkdel/diffusion.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_map>

namespace linkdel {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::NonTree: return "non-tree";
    case Variant::TreeFirst: return "tree-first";
    case Variant::TreeLast: return "tree-last";
  }
  return "?";
}

std::optional<Variant> parse_variant(std::string_view name) {
  if (name == "non-tree") return Variant::NonTree;
  if (name == "tree-first") return Variant::TreeFirst;
  if (name == "tree-last") return Variant::TreeLast;
  return std::nullopt;
}

std::size_t DiffusionGraph::uncovered_users() const {
  return static_cast<std::size_t>(std::count(network_ids.begin(), network_ids.end(), kNoNode));
}

namespace {

struct Candidate {
  NodeId parent;   // local id
  EdgeId follow;   // network edge id
};

DiffusionGraph build(const DirectedGraph& network, const CascadeLog& log, Variant variant) {
  DiffusionGraph dg;
  dg.cascade_id = log.cascade_id;
  dg.variant = variant;
  const std::size_t n = log.size();
  dg.users.reserve(n);
  dg.timestamps.reserve(n);
  dg.network_ids.reserve(n);

  // Logs are normally already ordered, but the local-id contract depends on it.
  std::vector<const CascadeEvent*> order;
  order.reserve(n);
  for (const auto& ev : log.events) order.push_back(&ev);
  std::sort(order.begin(), order.end(), [](const CascadeEvent* a, const CascadeEvent* b) {
    return a->timestamp != b->timestamp ? a->timestamp < b->timestamp : a->user < b->user;
  });

  std::unordered_map<NodeId, NodeId> local_of;
  local_of.reserve(n);
  for (const CascadeEvent* ev : order) {
    const auto local = static_cast<NodeId>(dg.users.size());
    const NodeId nid = network.find(ev->user).value_or(kNoNode);
    dg.users.push_back(ev->user);
    dg.timestamps.push_back(ev->timestamp);
    dg.network_ids.push_back(nid);
    if (nid != kNoNode) local_of.emplace(nid, local);
  }

  std::vector<std::pair<Edge, EdgeId>> edges;
  std::vector<Candidate> candidates;
  for (NodeId v = 0; v < n; ++v) {
    const NodeId nv = dg.network_ids[v];
    if (nv == kNoNode) continue;
    candidates.clear();
    // v follows each successor of nv in the network.
    const auto followees = network.successors(nv);
    const EdgeId base = network.first_out_edge(nv);
    for (std::size_t i = 0; i < followees.size(); ++i) {
      const auto it = local_of.find(followees[i]);
      if (it == local_of.end()) continue;
      const NodeId u = it->second;
      if (dg.timestamps[u] < dg.timestamps[v]) {
        candidates.push_back({u, static_cast<EdgeId>(base + i)});
      }
    }
    if (candidates.empty()) continue;
    if (variant == Variant::NonTree) {
      for (const auto& c : candidates) edges.push_back({{c.parent, v}, c.follow});
      continue;
    }
    // Ties on timestamp fall to the smaller user id. Local ids are ordered by
    // (timestamp, user), so earliest = min local id; latest = the first local
    // id carrying the maximum timestamp.
    const Candidate* best = &candidates.front();
    for (const auto& c : candidates) {
      if (variant == Variant::TreeFirst) {
        if (c.parent < best->parent) best = &c;
      } else {
        const auto tc = dg.timestamps[c.parent];
        const auto tb = dg.timestamps[best->parent];
        if (tc > tb || (tc == tb && c.parent < best->parent)) best = &c;
      }
    }
    edges.push_back({{best->parent, v}, best->follow});
  }

  std::sort(edges.begin(), edges.end());
  std::vector<Edge> plain;
  plain.reserve(edges.size());
  dg.follow_edges.reserve(edges.size());
  for (const auto& [e, follow] : edges) {
    plain.push_back(e);
    dg.follow_edges.push_back(follow);
  }
  std::vector<std::string> labels = dg.users;
  dg.graph = DirectedGraph::from_dense(n, plain, std::move(labels));
  dg.seeds = seeds_of(dg);
  return dg;
}

}  // namespace

DiffusionGraph build_non_tree(const DirectedGraph& network, const CascadeLog& log) {
  return build(network, log, Variant::NonTree);
}

DiffusionGraph build_tree_first(const DirectedGraph& network, const CascadeLog& log) {
  return build(network, log, Variant::TreeFirst);
}

DiffusionGraph build_tree_last(const DirectedGraph& network, const CascadeLog& log) {
  return build(network, log, Variant::TreeLast);
}

DiffusionGraph build_diffusion(const DirectedGraph& network, const CascadeLog& log, Variant variant) {
  return build(network, log, variant);
}

std::vector<NodeId> seeds_of(const DiffusionGraph& dg) {
  std::vector<NodeId> seeds;
  for (NodeId v = 0; v < dg.graph.node_count(); ++v) {
    if (dg.graph.in_degree(v) == 0) seeds.push_back(v);
  }
  return seeds;
}

namespace {

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

void write_dot(std::ostream& out, const DiffusionGraph& dg, const std::vector<bool>& removed) {
  out << "digraph " << dot_quote(dg.cascade_id) << " {\n";
  out << "  // variant=" << to_string(dg.variant) << " nodes=" << dg.size()
      << " edges=" << dg.graph.edge_count() << " seeds=" << dg.seeds.size() << "\n";
  std::vector<char> is_seed(dg.size(), 0);
  for (NodeId s : dg.seeds) is_seed[s] = 1;
  for (NodeId v = 0; v < dg.size(); ++v) {
    out << "  n" << v << " [label=" << dot_quote(dg.users[v] + "\\n" + std::to_string(dg.timestamps[v]));
    if (is_seed[v]) out << ", style=filled, fillcolor=lightgreen";
    out << "];\n";
  }
  for (EdgeId e = 0; e < dg.graph.edge_count(); ++e) {
    const Edge edge = dg.graph.edge(e);
    out << "  n" << edge.src << " -> n" << edge.dst;
    if (!removed.empty() && removed[e]) out << " [style=dashed, color=red]";
    out << ";\n";
  }
  out << "}\n";
}

}  // namespace linkdel
