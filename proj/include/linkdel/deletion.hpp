#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "linkdel/graph.hpp"

namespace linkdel {

enum class Strategy { NetMelt, Betweenness, EdgeDegree, Random };

std::string_view to_string(Strategy s);
/// Accepts "netmelt", "betweenness", "edge-degree", "random".
std::optional<Strategy> parse_strategy(std::string_view name);

struct RankedEdge {
  EdgeId id = 0;  // in the network the plan was built on
  Edge edge;      // follower -> followee
  double score = 0.0;
};

/// Ordered follow edges to delete. Scores are non-increasing (all zero for
/// Random, whose order is the sampled permutation).
struct DeletionPlan {
  Strategy strategy = Strategy::Random;
  std::size_t budget = 0;
  std::uint64_t rng_seed = 0;
  std::size_t network_edge_count = 0;
  std::string note;
  std::vector<RankedEdge> ranked_edges;

  std::size_t size() const noexcept { return ranked_edges.size(); }
  /// Removal flags over network edge ids for the first k ranked edges.
  std::vector<bool> mask(std::size_t k) const;
  std::vector<bool> mask() const { return mask(ranked_edges.size()); }
  /// The first k ranked edges as a plan of budget k.
  DeletionPlan prefix(std::size_t k) const;
};

/// Top-k edges by descending score; ties go to the smaller edge id, i.e. the
/// lexicographically smaller (src, dst).
std::vector<RankedEdge> rank_edges(const DirectedGraph& network, const std::vector<double>& scores,
                                   std::size_t k);

/// Scores follow edge (i, j) by left[i] * right[j] of the leading eigenpair,
/// the first-order drop in spectral radius from removing it. Scores are
/// computed once; there is no re-scoring between deletions.
DeletionPlan plan_netmelt(const DirectedGraph& network, std::size_t k, const EigenOptions& options = {});
DeletionPlan plan_betweenness(const DirectedGraph& network, std::size_t k, unsigned threads = 1);
/// Scores (u, v) by in_degree(u) * out_degree(v).
DeletionPlan plan_edge_degree(const DirectedGraph& network, std::size_t k);
/// Uniform sample without replacement: a partial Fisher-Yates shuffle of
/// edge ids driven by std::mt19937_64(rng_seed), with bounded draws by
/// rejection so the sequence does not depend on the standard library.
DeletionPlan plan_random(const DirectedGraph& network, std::size_t k, std::uint64_t rng_seed);

struct PlanOptions {
  EigenOptions eigen;
  unsigned threads = 1;
  std::uint64_t rng_seed = 0;
};

DeletionPlan make_plan(const DirectedGraph& network, Strategy strategy, std::size_t k,
                       const PlanOptions& options = {});

/// Plan file: a `strategy,k,seed` header line, the matching value line,
/// optional `# ` note lines, then `src<TAB>dst<TAB>score` per ranked edge
/// using external node labels.
void write_plan(std::ostream& out, const DeletionPlan& plan, const DirectedGraph& network);
void write_plan(const std::filesystem::path& path, const DeletionPlan& plan, const DirectedGraph& network);
/// Resolves labels against `network`; unknown nodes or edges are InputErrors.
DeletionPlan read_plan(std::istream& in, const DirectedGraph& network);
DeletionPlan read_plan(const std::filesystem::path& path, const DirectedGraph& network);

}  // namespace linkdel
