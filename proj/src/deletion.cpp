#include "linkdel/deletion.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>

#include "linkdel/errors.hpp"

namespace linkdel {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::NetMelt: return "netmelt";
    case Strategy::Betweenness: return "betweenness";
    case Strategy::EdgeDegree: return "edge-degree";
    case Strategy::Random: return "random";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  if (name == "netmelt") return Strategy::NetMelt;
  if (name == "betweenness") return Strategy::Betweenness;
  if (name == "edge-degree") return Strategy::EdgeDegree;
  if (name == "random") return Strategy::Random;
  return std::nullopt;
}

std::vector<bool> DeletionPlan::mask(std::size_t k) const {
  std::vector<bool> removed(network_edge_count, false);
  k = std::min(k, ranked_edges.size());
  for (std::size_t i = 0; i < k; ++i) removed[ranked_edges[i].id] = true;
  return removed;
}

DeletionPlan DeletionPlan::prefix(std::size_t k) const {
  DeletionPlan p = *this;
  k = std::min(k, ranked_edges.size());
  p.budget = k;
  p.ranked_edges.resize(k);
  return p;
}

std::vector<RankedEdge> rank_edges(const DirectedGraph& network, const std::vector<double>& scores,
                                   std::size_t k) {
  const std::size_t m = network.edge_count();
  if (scores.size() != m) throw InvariantError("one score per edge expected");
  k = std::min(k, m);
  std::vector<EdgeId> ids(m);
  std::iota(ids.begin(), ids.end(), EdgeId{0});
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(),
                    [&](EdgeId a, EdgeId b) { return scores[a] != scores[b] ? scores[a] > scores[b] : a < b; });
  std::vector<RankedEdge> ranked;
  ranked.reserve(k);
  for (std::size_t i = 0; i < k; ++i) ranked.push_back({ids[i], network.edge(ids[i]), scores[ids[i]]});
  return ranked;
}

namespace {

DeletionPlan empty_plan(const DirectedGraph& network, Strategy strategy, std::size_t k) {
  DeletionPlan plan;
  plan.strategy = strategy;
  plan.budget = std::min(k, network.edge_count());
  plan.network_edge_count = network.edge_count();
  return plan;
}

}  // namespace

DeletionPlan plan_netmelt(const DirectedGraph& network, std::size_t k, const EigenOptions& options) {
  DeletionPlan plan = empty_plan(network, Strategy::NetMelt, k);
  if (k == 0) return plan;
  const EigenPair pair = leading_eigenpair(network, options);
  std::vector<double> scores(network.edge_count());
  for (EdgeId e = 0; e < scores.size(); ++e) {
    const Edge edge = network.edge(e);
    scores[e] = pair.left[edge.src] * pair.right[edge.dst];
  }
  plan.ranked_edges = rank_edges(network, scores, k);
  plan.note = "scoring=one-shot left*right eigenvector product; eigenvalue=" +
              std::to_string(pair.eigenvalue) + " iterations=" + std::to_string(pair.iterations);
  return plan;
}

DeletionPlan plan_betweenness(const DirectedGraph& network, std::size_t k, unsigned threads) {
  DeletionPlan plan = empty_plan(network, Strategy::Betweenness, k);
  if (k == 0) return plan;
  plan.ranked_edges = rank_edges(network, edge_betweenness(network, threads), k);
  plan.note = "scoring=static edge betweenness on the full network";
  return plan;
}

DeletionPlan plan_edge_degree(const DirectedGraph& network, std::size_t k) {
  DeletionPlan plan = empty_plan(network, Strategy::EdgeDegree, k);
  if (k == 0) return plan;
  std::vector<double> scores(network.edge_count());
  for (EdgeId e = 0; e < scores.size(); ++e) {
    const Edge edge = network.edge(e);
    scores[e] = static_cast<double>(network.in_degree(edge.src)) *
                static_cast<double>(network.out_degree(edge.dst));
  }
  plan.ranked_edges = rank_edges(network, scores, k);
  return plan;
}

namespace {

// Uniform draw in [0, bound) for bound > 0.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  while (true) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

}  // namespace

DeletionPlan plan_random(const DirectedGraph& network, std::size_t k, std::uint64_t rng_seed) {
  DeletionPlan plan = empty_plan(network, Strategy::Random, k);
  plan.rng_seed = rng_seed;
  const std::size_t m = network.edge_count();
  k = plan.budget;
  std::vector<EdgeId> ids(m);
  std::iota(ids.begin(), ids.end(), EdgeId{0});
  std::mt19937_64 rng(rng_seed);
  plan.ranked_edges.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(bounded(rng, m - i));
    std::swap(ids[i], ids[j]);
    plan.ranked_edges.push_back({ids[i], network.edge(ids[i]), 0.0});
  }
  plan.note = "sampler=partial Fisher-Yates, mt19937_64";
  return plan;
}

DeletionPlan make_plan(const DirectedGraph& network, Strategy strategy, std::size_t k,
                       const PlanOptions& options) {
  switch (strategy) {
    case Strategy::NetMelt: return plan_netmelt(network, k, options.eigen);
    case Strategy::Betweenness: return plan_betweenness(network, k, options.threads);
    case Strategy::EdgeDegree: return plan_edge_degree(network, k);
    case Strategy::Random: return plan_random(network, k, options.rng_seed);
  }
  throw InvariantError("unknown strategy");
}

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename T>
T parse_number(std::string_view s, std::size_t line_no, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(std::string("plan file: bad ") + what + " '" + std::string(s) + "'", line_no);
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

}  // namespace

void write_plan(std::ostream& out, const DeletionPlan& plan, const DirectedGraph& network) {
  out << "strategy,k,seed\n";
  out << to_string(plan.strategy) << ',' << plan.budget << ',' << plan.rng_seed << '\n';
  if (!plan.note.empty()) {
    for (const auto note_line : split(plan.note, '\n')) out << "# " << note_line << '\n';
  }
  for (const auto& r : plan.ranked_edges) {
    out << network.label(r.edge.src) << '\t' << network.label(r.edge.dst) << '\t'
        << format_double(r.score) << '\n';
  }
}

void write_plan(const std::filesystem::path& path, const DeletionPlan& plan, const DirectedGraph& network) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  write_plan(out, plan, network);
  if (!out) throw InputError("write failed for " + path.string());
}

DeletionPlan read_plan(std::istream& in, const DirectedGraph& network) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      return true;
    }
    return false;
  };
  if (!next() || line != "strategy,k,seed") throw ParseError("plan file: missing 'strategy,k,seed' header", line_no);
  if (!next()) throw ParseError("plan file: missing header values", line_no);
  const auto head = split(line, ',');
  if (head.size() != 3) throw ParseError("plan file: expected 'strategy,k,seed' values", line_no);
  DeletionPlan plan;
  const auto strategy = parse_strategy(head[0]);
  if (!strategy) throw ParseError("plan file: unknown strategy '" + std::string(head[0]) + "'", line_no);
  plan.strategy = *strategy;
  plan.budget = parse_number<std::size_t>(head[1], line_no, "k");
  plan.rng_seed = parse_number<std::uint64_t>(head[2], line_no, "seed");
  plan.network_edge_count = network.edge_count();

  std::vector<bool> seen(network.edge_count(), false);
  while (next()) {
    if (line.front() == '#') {
      const std::string_view note = std::string_view(line).substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
      if (!plan.note.empty()) plan.note += '\n';
      plan.note += note;
      continue;
    }
    const auto fields = split(line, '\t');
    if (fields.size() != 3) throw ParseError("plan file: expected 'src<TAB>dst<TAB>score'", line_no);
    const auto src = network.find(fields[0]);
    const auto dst = network.find(fields[1]);
    if (!src || !dst) throw InputError("plan file: unknown node on line " + std::to_string(line_no));
    const auto id = network.find_edge(*src, *dst);
    if (!id) throw InputError("plan file: edge not in network on line " + std::to_string(line_no));
    if (seen[*id]) throw InputError("plan file: duplicate edge on line " + std::to_string(line_no));
    seen[*id] = true;
    plan.ranked_edges.push_back({*id, {*src, *dst}, parse_number<double>(fields[2], line_no, "score")});
  }
  if (in.bad()) throw InputError("plan file: read error");
  if (plan.ranked_edges.size() != plan.budget) {
    throw InputError("plan file: header k=" + std::to_string(plan.budget) + " but " +
                     std::to_string(plan.ranked_edges.size()) + " edges listed");
  }
  return plan;
}

DeletionPlan read_plan(const std::filesystem::path& path, const DirectedGraph& network) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return read_plan(in, network);
}

}  // namespace linkdel
