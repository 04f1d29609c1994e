#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "linkdel/deletion.hpp"
#include "linkdel/diffusion.hpp"
#include "linkdel/estimator.hpp"
#include "linkdel/graph.hpp"
#include "linkdel/ingest.hpp"

namespace linkdel {

struct ExperimentConfig {
  std::filesystem::path edges_path;
  std::filesystem::path cascades_path;
  std::filesystem::path out_dir = "out";
  std::size_t min_cascade_size = 100;
  std::vector<Strategy> strategies{Strategy::NetMelt, Strategy::Betweenness, Strategy::EdgeDegree,
                                   Strategy::Random};
  std::vector<Variant> variants{Variant::NonTree, Variant::TreeFirst, Variant::TreeLast};
  std::vector<double> budget_fractions{0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50};
  std::uint64_t rng_seed = 0;
  bool strict_parse = false;
  unsigned threads = 1;
  EigenOptions eigen;

  /// Fractions must lie in [0, 1]; they are sorted and deduplicated here.
  /// Empty strategy or variant lists are rejected. Throws InputError.
  void normalize();
};

std::vector<Strategy> parse_strategies(std::string_view list);
std::vector<Variant> parse_variants(std::string_view list);
std::vector<double> parse_fractions(std::string_view list);

/// Number of edges deleted for a fraction of |E|, rounded half up.
std::size_t budget_for_fraction(double fraction, std::size_t edge_count);

/// Formats a fraction the shortest way that reads back exactly.
std::string format_fraction(double fraction);

struct Dataset {
  DirectedGraph network;
  std::vector<LabeledEdge> raw_edges;
  std::vector<CascadeLog> all_logs;
  std::vector<CascadeLog> logs;  // after the size filter
  std::size_t malformed_edge_lines = 0;
  std::size_t malformed_cascade_lines = 0;
  std::size_t duplicate_events = 0;
  std::size_t uncovered_users = 0;
};

/// Loads both files and filters by min_cascade_size. Errors name the stage.
Dataset load_dataset(const ExperimentConfig& config);

struct SweepRow {
  Strategy strategy;
  Variant variant;
  std::size_t budget;
  double fraction;
  std::size_t total_estimated;
  std::size_t total_original;
};

struct SweepResult {
  std::vector<SweepRow> summary;
  std::vector<std::filesystem::path> files;  // every file written, summary last
};

/// Runs every (strategy, variant, fraction) point and writes
///   <out>/plans/<strategy>.plan
///   <out>/estimates/<strategy>_<variant>_k<k>.csv
///   <out>/summary.csv
/// Each strategy's plan is computed once at the largest budget (or read back
/// from plans/ when a compatible one is there) and reused by prefix.
SweepResult run_sweep(const ExperimentConfig& config);
SweepResult run_sweep(const ExperimentConfig& config, const Dataset& data);

void write_summary_csv(std::ostream& out, std::span<const SweepRow> rows);

struct SeedRow {
  std::string cascade_id;
  std::size_t original_size;
  std::size_t seed_count;
  friend bool operator==(const SeedRow&, const SeedRow&) = default;
};

/// One row per cascade of at most max_size users, in input order. Seed sets
/// do not depend on the variant, so the non-tree graph is used.
std::vector<SeedRow> seed_analysis(const DirectedGraph& network, std::span<const CascadeLog> logs,
                                   std::size_t max_size, unsigned threads = 1);
void write_seed_csv(std::ostream& out, std::span<const SeedRow> rows);

struct ScatterRow {
  std::string cascade_id;
  std::size_t original_size;
  std::size_t estimated_size;
  friend bool operator==(const ScatterRow&, const ScatterRow&) = default;
};

std::vector<ScatterRow> scatter_report(const EstimateReport& report);
void write_scatter_csv(std::ostream& out, std::span<const ScatterRow> rows);

/// gnuplot script drawing total estimated size against k, one panel per
/// variant and one line per strategy, from the summary CSV.
void write_gnuplot_script(std::ostream& out, const std::filesystem::path& summary_csv,
                          std::span<const Strategy> strategies, std::span<const Variant> variants);

}  // namespace linkdel
