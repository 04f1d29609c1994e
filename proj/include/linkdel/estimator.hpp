#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "linkdel/deletion.hpp"
#include "linkdel/diffusion.hpp"
#include "linkdel/graph.hpp"
#include "linkdel/ingest.hpp"

namespace linkdel {

struct CascadeEstimate {
  std::string cascade_id;
  std::size_t original_size = 0;
  std::size_t estimated_size = 0;
  std::size_t seed_count = 0;

  friend bool operator==(const CascadeEstimate&, const CascadeEstimate&) = default;
};

struct EstimateReport {
  Strategy strategy = Strategy::Random;
  Variant variant = Variant::NonTree;
  std::size_t budget = 0;
  std::vector<CascadeEstimate> per_cascade;  // sorted by cascade_id
  std::size_t total_original = 0;
  std::size_t total_estimated = 0;

  /// Throws InvariantError unless seed_count <= estimated <= original per row
  /// and the totals match the rows.
  void check() const;
};

/// Removes the diffusion edges whose justifying follow edge is flagged in
/// `removed_follow_edges` (indexed by network edge id). A deleted follow edge
/// (u, v), u following v, blocks spread from v to u. Nodes and seeds are kept.
DiffusionGraph apply_deletion(const DiffusionGraph& dg, const std::vector<bool>& removed_follow_edges);
DiffusionGraph apply_deletion(const DiffusionGraph& dg, const DeletionPlan& plan);

/// Number of nodes reachable from `original_seeds` (local ids).
std::size_t estimate_size(const DiffusionGraph& dg_after, std::span<const NodeId> original_seeds);

/// Same as estimate_size(apply_deletion(dg, removed), dg.seeds) without
/// materializing the reduced graph.
std::size_t estimate_after_deletion(const DiffusionGraph& dg, const std::vector<bool>& removed_follow_edges);

/// Builds every cascade's diffusion graph, applies the whole plan and
/// aggregates. Rows are sorted by cascade id whatever the thread count.
EstimateReport run_estimation(const DirectedGraph& network, std::span<const CascadeLog> logs,
                              const DeletionPlan& plan, Variant variant, unsigned threads = 1);

/// One report per budget in `budgets` (each clipped to the plan size), built
/// from a single construction of the diffusion graphs.
std::vector<EstimateReport> run_estimation_prefixes(const DirectedGraph& network,
                                                    std::span<const CascadeLog> logs,
                                                    const DeletionPlan& plan, Variant variant,
                                                    std::span<const std::size_t> budgets,
                                                    unsigned threads = 1);

/// CSV with header strategy,variant,k,cascade_id,original_size,estimated_size,seed_count.
void write_report_csv(std::ostream& out, const EstimateReport& report);
void write_report_csv(const std::filesystem::path& path, const EstimateReport& report);
EstimateReport read_report_csv(std::istream& in);
EstimateReport read_report_csv(const std::filesystem::path& path);

}  // namespace linkdel
