#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "linkdel/graph.hpp"
#include "linkdel/ingest.hpp"

namespace linkdel {

enum class Variant { NonTree, TreeFirst, TreeLast };

std::string_view to_string(Variant v);
/// Accepts "non-tree", "tree-first", "tree-last".
std::optional<Variant> parse_variant(std::string_view name);

inline constexpr EdgeId kNoEdge = static_cast<EdgeId>(-1);

/*
  Inferred spread paths of one cascade.

  Local node i is the i-th event of the cascade in (timestamp, user) order, so
  every diffusion edge points from a lower to a higher local id and the graph
  is acyclic. Edge (u, v) means the item spread from u to v; it exists only
  when v follows u and u posted strictly earlier. follow_edges[e] is the id,
  in the social network, of the follow edge (v, u) that justified diffusion
  edge e.
*/
struct DiffusionGraph {
  std::string cascade_id;
  Variant variant = Variant::NonTree;
  std::vector<std::string> users;          // by local id
  std::vector<std::int64_t> timestamps;    // by local id
  std::vector<NodeId> network_ids;         // kNoNode when absent from the network
  DirectedGraph graph;                     // over local ids
  std::vector<EdgeId> follow_edges;        // by diffusion edge id
  std::vector<NodeId> seeds;               // local ids with in-degree 0, ascending

  std::size_t size() const noexcept { return users.size(); }
  std::size_t uncovered_users() const;
};

DiffusionGraph build_non_tree(const DirectedGraph& network, const CascadeLog& log);
/// Each non-seed keeps only its earliest-posting followee as parent.
DiffusionGraph build_tree_first(const DirectedGraph& network, const CascadeLog& log);
/// Each non-seed keeps only its latest earlier-posting followee as parent.
DiffusionGraph build_tree_last(const DirectedGraph& network, const CascadeLog& log);
DiffusionGraph build_diffusion(const DirectedGraph& network, const CascadeLog& log, Variant variant);

/// Local ids with no incoming diffusion edge.
std::vector<NodeId> seeds_of(const DiffusionGraph& dg);

/// Graphviz rendering; seeds are filled light green. Diffusion edges listed
/// in `removed` (by diffusion edge id) are drawn dashed.
void write_dot(std::ostream& out, const DiffusionGraph& dg, const std::vector<bool>& removed = {});

}  // namespace linkdel
