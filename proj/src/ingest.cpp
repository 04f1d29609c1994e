#include "linkdel/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "linkdel/errors.hpp"

namespace linkdel {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  if (line.find('\t') != std::string_view::npos) {
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    return fields;
  }
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

// Strips a trailing CR. Returns false for blank and comment lines.
bool content_line(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.empty() || line.front() == '#') return false;
  return line.find_first_not_of(" \t") != std::string::npos;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

void check_stream(const std::istream& in) {
  if (in.bad()) throw InputError("read error on input stream");
}

}  // namespace

FollowEdgeFile load_follow_edges(std::istream& in, bool strict) {
  FollowEdgeFile result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!content_line(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      if (strict) throw ParseError("expected 'follower<TAB>followee'", line_no);
      if (result.malformed_lines++ == 0) result.first_malformed_line = line_no;
      continue;
    }
    result.edges.emplace_back(std::string(fields[0]), std::string(fields[1]));
  }
  check_stream(in);
  return result;
}

FollowEdgeFile load_follow_edges(const std::filesystem::path& path, bool strict) {
  auto in = open_input(path);
  return load_follow_edges(in, strict);
}

CascadeFile load_cascades(std::istream& in, bool strict) {
  CascadeFile result;
  std::unordered_map<std::string, std::size_t> slot;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!content_line(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
      if (strict) throw ParseError("expected 'cascade_id<TAB>user_id<TAB>timestamp'", line_no);
      if (result.malformed_lines++ == 0) result.first_malformed_line = line_no;
      continue;
    }
    std::int64_t ts = 0;
    const auto ts_field = fields[2];
    const auto [ptr, ec] = std::from_chars(ts_field.data(), ts_field.data() + ts_field.size(), ts);
    if (ec != std::errc() || ptr != ts_field.data() + ts_field.size()) {
      throw ParseError("non-integer timestamp '" + std::string(ts_field) + "'", line_no);
    }
    auto [it, inserted] = slot.try_emplace(std::string(fields[0]), result.logs.size());
    if (inserted) result.logs.push_back({std::string(fields[0]), {}});
    result.logs[it->second].events.push_back({std::string(fields[1]), ts});
  }
  check_stream(in);

  for (auto& log : result.logs) {
    auto& ev = log.events;
    std::sort(ev.begin(), ev.end(), [](const CascadeEvent& a, const CascadeEvent& b) {
      return a.user != b.user ? a.user < b.user : a.timestamp < b.timestamp;
    });
    const auto last = std::unique(ev.begin(), ev.end(), [](const CascadeEvent& a, const CascadeEvent& b) {
      return a.user == b.user;
    });
    result.duplicate_events += static_cast<std::size_t>(ev.end() - last);
    ev.erase(last, ev.end());
    std::sort(ev.begin(), ev.end(), [](const CascadeEvent& a, const CascadeEvent& b) {
      return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.user < b.user;
    });
  }
  std::sort(result.logs.begin(), result.logs.end(),
            [](const CascadeLog& a, const CascadeLog& b) { return a.cascade_id < b.cascade_id; });
  return result;
}

CascadeFile load_cascades(const std::filesystem::path& path, bool strict) {
  auto in = open_input(path);
  return load_cascades(in, strict);
}

void write_follow_edges(std::ostream& out, std::span<const LabeledEdge> edges) {
  for (const auto& [src, dst] : edges) out << src << '\t' << dst << '\n';
}

void write_cascades(std::ostream& out, std::span<const CascadeLog> logs) {
  for (const auto& log : logs) {
    for (const auto& ev : log.events) {
      out << log.cascade_id << '\t' << ev.user << '\t' << ev.timestamp << '\n';
    }
  }
}

std::vector<CascadeLog> filter_cascades(std::span<const CascadeLog> logs, std::size_t min_size) {
  std::vector<CascadeLog> kept;
  for (const auto& log : logs) {
    if (log.size() >= min_size) kept.push_back(log);
  }
  return kept;
}

DatasetStats compute_stats(std::span<const LabeledEdge> edges, std::span<const CascadeLog> logs) {
  DatasetStats stats;
  std::vector<LabeledEdge> links;
  links.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.first != e.second) links.push_back(e);
  }
  std::sort(links.begin(), links.end());
  links.erase(std::unique(links.begin(), links.end()), links.end());
  stats.link_count = links.size();

  std::unordered_set<std::string_view> users;
  for (const auto& [src, dst] : links) {
    users.insert(src);
    users.insert(dst);
  }
  std::size_t total = 0;
  for (const auto& log : logs) {
    total += log.size();
    for (const auto& ev : log.events) users.insert(ev.user);
  }
  stats.user_count = users.size();
  stats.cascade_count = logs.size();
  if (stats.cascade_count > 0) {
    stats.mean_cascade_size = static_cast<double>(total) / static_cast<double>(stats.cascade_count);
  }
  return stats;
}

std::size_t count_uncovered_users(const DirectedGraph& network, std::span<const CascadeLog> logs) {
  std::unordered_set<std::string_view> missing;
  for (const auto& log : logs) {
    for (const auto& ev : log.events) {
      if (!network.find(ev.user)) missing.insert(ev.user);
    }
  }
  return missing.size();
}

}  // namespace linkdel
