#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace linkdel {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

using LabeledEdge = std::pair<std::string, std::string>;

/*
  Immutable directed graph in compressed sparse form.

  Nodes are dense ids 0..n-1, each carrying an opaque external label. Edges
  are stored sorted by (src, dst); an edge's id is its position in the
  forward arrays, so iterating ids in order is iterating edges
  lexicographically. The reverse arrays index the same edge ids.
*/
class DirectedGraph {
 public:
  DirectedGraph() = default;

  /// Builds from labeled pairs. Self-loops and duplicates are dropped; dense
  /// ids follow the lexicographic order of the labels.
  static DirectedGraph from_labeled_edges(std::span<const LabeledEdge> edges);

  /// Builds over nodes 0..node_count-1. Labels default to the decimal id.
  /// Self-loops and duplicates are dropped.
  static DirectedGraph from_dense(std::size_t node_count, std::span<const Edge> edges,
                                  std::vector<std::string> labels = {});

  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return targets_.size(); }

  std::span<const NodeId> successors(NodeId v) const {
    return {targets_.data() + out_offsets_[v], targets_.data() + out_offsets_[v + 1]};
  }
  std::span<const NodeId> predecessors(NodeId v) const {
    return {sources_.data() + in_offsets_[v], sources_.data() + in_offsets_[v + 1]};
  }
  /// Out-edges of v occupy ids [first_out_edge(v), first_out_edge(v + 1)).
  EdgeId first_out_edge(NodeId v) const { return out_offsets_[v]; }
  /// Ids of the in-edges of v, aligned with predecessors(v).
  std::span<const EdgeId> in_edge_ids(NodeId v) const {
    return {in_edge_ids_.data() + in_offsets_[v], in_edge_ids_.data() + in_offsets_[v + 1]};
  }

  std::size_t out_degree(NodeId v) const { return out_offsets_[v + 1] - out_offsets_[v]; }
  std::size_t in_degree(NodeId v) const { return in_offsets_[v + 1] - in_offsets_[v]; }

  Edge edge(EdgeId e) const { return {edge_src_[e], targets_[e]}; }
  std::optional<EdgeId> find_edge(NodeId src, NodeId dst) const;

  const std::string& label(NodeId v) const { return labels_[v]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<NodeId> find(std::string_view label) const;

 private:
  void assemble(std::vector<Edge> edges);

  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<EdgeId> out_offsets_{0};
  std::vector<NodeId> targets_;
  std::vector<NodeId> edge_src_;
  std::vector<EdgeId> in_offsets_{0};
  std::vector<NodeId> sources_;
  std::vector<EdgeId> in_edge_ids_;
};

inline DirectedGraph build_graph(std::span<const LabeledEdge> edges) {
  return DirectedGraph::from_labeled_edges(edges);
}

/// Sources plus every node reachable from them, sorted ascending.
/// Throws InputError on an id outside the graph.
std::vector<NodeId> reachable_from(const DirectedGraph& graph, std::span<const NodeId> sources);

/// Same, ignoring every edge whose id is flagged in `removed`.
std::vector<NodeId> reachable_from(const DirectedGraph& graph, std::span<const NodeId> sources,
                                   const std::vector<bool>& removed);

/// Exact directed edge betweenness, indexed by EdgeId.
///
/// Every ordered pair (s, t) adds, to each edge, the fraction of shortest
/// s->t paths that use it. Sources are split into `threads` contiguous
/// blocks; partial sums are merged in block order, so the result is
/// reproducible for a given thread count.
std::vector<double> edge_betweenness(const DirectedGraph& graph, unsigned threads = 1);

struct EigenPair {
  double eigenvalue = 0.0;
  std::vector<double> left;   // unit norm, A^T left = eigenvalue * left
  std::vector<double> right;  // unit norm, A right = eigenvalue * right
  int iterations = 0;
  double residual = 0.0;      // ||A right - eigenvalue * right||
};

struct EigenOptions {
  double tolerance = 1e-9;
  int max_iterations = 10000;
};

/// Perron eigenpair of the adjacency matrix by power iteration.
///
/// Both vectors start uniform-positive and are iterated with the shifted
/// operator (A + I), which has the same eigenvectors and a strictly dominant
/// Perron value even when A is periodic. Acyclic graphs have spectral radius
/// 0 and are answered directly. Throws ConvergenceError carrying the best
/// residual when either vector fails to converge, and InputError when the
/// graph has no edges or the tolerance is not positive.
EigenPair leading_eigenpair(const DirectedGraph& graph, const EigenOptions& options = {});

/// True when the graph has a directed cycle.
bool has_cycle(const DirectedGraph& graph);

}  // namespace linkdel
