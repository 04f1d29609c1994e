#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "linkdel/graph.hpp"

namespace linkdel {

// Canonical text formats
// ----------------------
// Follow edges:  follower<TAB>followee            ('#' lines are comments)
// Cascades:      cascade_id<TAB>user_id<TAB>timestamp
//
// Lines without a tab are split on runs of spaces instead, which accepts the
// space-separated SNAP distributions unchanged. Blank lines are ignored.

struct CascadeEvent {
  std::string user;
  std::int64_t timestamp = 0;

  friend bool operator==(const CascadeEvent&, const CascadeEvent&) = default;
};

/// One tweet or topic with its posting users. At most one event per user,
/// sorted by (timestamp, user).
struct CascadeLog {
  std::string cascade_id;
  std::vector<CascadeEvent> events;

  std::size_t size() const noexcept { return events.size(); }
  friend bool operator==(const CascadeLog&, const CascadeLog&) = default;
};

struct FollowEdgeFile {
  std::vector<LabeledEdge> edges;  // file order
  std::size_t malformed_lines = 0;
  std::size_t first_malformed_line = 0;  // 1-based, 0 when none
};

struct CascadeFile {
  std::vector<CascadeLog> logs;  // sorted by cascade_id
  std::size_t malformed_lines = 0;
  std::size_t first_malformed_line = 0;
  std::size_t duplicate_events = 0;  // same user repeated inside a cascade
};

struct DatasetStats {
  std::size_t user_count = 0;
  std::size_t link_count = 0;
  std::size_t cascade_count = 0;
  double mean_cascade_size = 0.0;
};

/// Reads follow edges. With `strict`, the first malformed line raises a
/// ParseError; otherwise malformed lines are skipped and counted.
FollowEdgeFile load_follow_edges(std::istream& in, bool strict = false);
FollowEdgeFile load_follow_edges(const std::filesystem::path& path, bool strict = false);

/// Reads cascade events and groups them by cascade id. A user repeated inside
/// one cascade keeps the earliest timestamp. Non-integer timestamps are always
/// a ParseError; other malformed lines follow `strict` as above.
CascadeFile load_cascades(std::istream& in, bool strict = false);
CascadeFile load_cascades(const std::filesystem::path& path, bool strict = false);

void write_follow_edges(std::ostream& out, std::span<const LabeledEdge> edges);
void write_cascades(std::ostream& out, std::span<const CascadeLog> logs);

/// Keeps cascades with at least `min_size` users, preserving order.
std::vector<CascadeLog> filter_cascades(std::span<const CascadeLog> logs, std::size_t min_size);

/// link_count counts distinct non-loop edges; user_count counts distinct
/// users over those edges and all cascade events.
DatasetStats compute_stats(std::span<const LabeledEdge> edges, std::span<const CascadeLog> logs);

/// Event users missing from the network's node set.
std::size_t count_uncovered_users(const DirectedGraph& network, std::span<const CascadeLog> logs);

}  // namespace linkdel
