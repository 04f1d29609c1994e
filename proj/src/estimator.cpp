#include "linkdel/estimator.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "linkdel/errors.hpp"
#include "linkdel/parallel.hpp"

namespace linkdel {

namespace {

constexpr std::string_view kReportHeader =
    "strategy,variant,k,cascade_id,original_size,estimated_size,seed_count";

bool follow_removed(const std::vector<bool>& removed, EdgeId follow) {
  return follow != kNoEdge && follow < removed.size() && removed[follow];
}

}  // namespace

void EstimateReport::check() const {
  std::size_t orig = 0;
  std::size_t est = 0;
  for (const auto& row : per_cascade) {
    if (row.seed_count > row.estimated_size || row.estimated_size > row.original_size) {
      throw InvariantError("cascade " + row.cascade_id + ": expected seeds <= estimate <= original, got " +
                           std::to_string(row.seed_count) + ", " + std::to_string(row.estimated_size) +
                           ", " + std::to_string(row.original_size));
    }
    orig += row.original_size;
    est += row.estimated_size;
  }
  if (orig != total_original || est != total_estimated) {
    throw InvariantError("report totals do not match per-cascade rows");
  }
}

DiffusionGraph apply_deletion(const DiffusionGraph& dg, const std::vector<bool>& removed_follow_edges) {
  DiffusionGraph out;
  out.cascade_id = dg.cascade_id;
  out.variant = dg.variant;
  out.users = dg.users;
  out.timestamps = dg.timestamps;
  out.network_ids = dg.network_ids;
  out.seeds = dg.seeds;

  std::vector<Edge> kept;
  kept.reserve(dg.graph.edge_count());
  for (EdgeId e = 0; e < dg.graph.edge_count(); ++e) {
    if (follow_removed(removed_follow_edges, dg.follow_edges[e])) continue;
    kept.push_back(dg.graph.edge(e));
    out.follow_edges.push_back(dg.follow_edges[e]);
  }
  // kept is already in (src, dst) order, so edge ids stay aligned with follow_edges.
  out.graph = DirectedGraph::from_dense(dg.size(), kept, dg.users);
  return out;
}

DiffusionGraph apply_deletion(const DiffusionGraph& dg, const DeletionPlan& plan) {
  return apply_deletion(dg, plan.mask());
}

std::size_t estimate_size(const DiffusionGraph& dg_after, std::span<const NodeId> original_seeds) {
  return reachable_from(dg_after.graph, original_seeds).size();
}

std::size_t estimate_after_deletion(const DiffusionGraph& dg, const std::vector<bool>& removed_follow_edges) {
  const std::size_t n = dg.size();
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack(dg.seeds.begin(), dg.seeds.end());
  for (NodeId s : stack) seen[s] = 1;
  std::size_t count = stack.size();
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    const auto succ = dg.graph.successors(v);
    const EdgeId base = dg.graph.first_out_edge(v);
    for (std::size_t i = 0; i < succ.size(); ++i) {
      if (follow_removed(removed_follow_edges, dg.follow_edges[base + i])) continue;
      const NodeId w = succ[i];
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count;
}

std::vector<EstimateReport> run_estimation_prefixes(const DirectedGraph& network,
                                                    std::span<const CascadeLog> logs,
                                                    const DeletionPlan& plan, Variant variant,
                                                    std::span<const std::size_t> budgets,
                                                    unsigned threads) {
  if (plan.network_edge_count != network.edge_count()) {
    throw InputError("deletion plan was built on a network with " + std::to_string(plan.network_edge_count) +
                     " edges, this network has " + std::to_string(network.edge_count()));
  }
  std::vector<std::vector<bool>> masks;
  masks.reserve(budgets.size());
  for (std::size_t k : budgets) masks.push_back(plan.mask(k));

  // rows[b][c]
  std::vector<std::vector<CascadeEstimate>> rows(budgets.size(), std::vector<CascadeEstimate>(logs.size()));
  parallel_for(logs.size(), threads, [&](std::size_t c) {
    const DiffusionGraph dg = build_diffusion(network, logs[c], variant);
    for (std::size_t b = 0; b < budgets.size(); ++b) {
      rows[b][c] = {dg.cascade_id, dg.size(), estimate_after_deletion(dg, masks[b]), dg.seeds.size()};
    }
  });

  std::vector<EstimateReport> reports;
  reports.reserve(budgets.size());
  for (std::size_t b = 0; b < budgets.size(); ++b) {
    EstimateReport report;
    report.strategy = plan.strategy;
    report.variant = variant;
    report.budget = std::min(budgets[b], plan.size());
    report.per_cascade = std::move(rows[b]);
    std::stable_sort(report.per_cascade.begin(), report.per_cascade.end(),
                     [](const CascadeEstimate& a, const CascadeEstimate& b) { return a.cascade_id < b.cascade_id; });
    for (const auto& row : report.per_cascade) {
      report.total_original += row.original_size;
      report.total_estimated += row.estimated_size;
    }
    report.check();
    reports.push_back(std::move(report));
  }
  return reports;
}

EstimateReport run_estimation(const DirectedGraph& network, std::span<const CascadeLog> logs,
                              const DeletionPlan& plan, Variant variant, unsigned threads) {
  const std::size_t all = plan.size();
  return std::move(run_estimation_prefixes(network, logs, plan, variant, {&all, 1}, threads).front());
}

void write_report_csv(std::ostream& out, const EstimateReport& report) {
  out << kReportHeader << '\n';
  for (const auto& row : report.per_cascade) {
    out << to_string(report.strategy) << ',' << to_string(report.variant) << ',' << report.budget << ','
        << row.cascade_id << ',' << row.original_size << ',' << row.estimated_size << ',' << row.seed_count
        << '\n';
  }
}

void write_report_csv(const std::filesystem::path& path, const EstimateReport& report) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  write_report_csv(out, report);
  if (!out) throw InputError("write failed for " + path.string());
}

namespace {

std::size_t parse_count(std::string_view s, std::size_t line_no) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("report: expected a non-negative integer, got '" + std::string(s) + "'", line_no);
  }
  return v;
}

}  // namespace

EstimateReport read_report_csv(std::istream& in) {
  EstimateReport report;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != kReportHeader) throw ParseError("report: unexpected header", line_no);
      header = true;
      continue;
    }
    // cascade_id is the only free-text column: peel three fields off each end.
    std::vector<std::string_view> f;
    std::string_view rest = line;
    for (int i = 0; i < 3; ++i) {
      const auto pos = rest.rfind(',');
      if (pos == std::string_view::npos) throw ParseError("report: too few columns", line_no);
      f.insert(f.begin(), rest.substr(pos + 1));
      rest = rest.substr(0, pos);
    }
    for (int i = 0; i < 3; ++i) {
      const auto pos = rest.find(',');
      if (pos == std::string_view::npos) throw ParseError("report: too few columns", line_no);
      f.insert(f.begin() + i, rest.substr(0, pos));
      rest = rest.substr(pos + 1);
    }
    f.insert(f.begin() + 3, rest);

    const auto strategy = parse_strategy(f[0]);
    const auto variant = parse_variant(f[1]);
    if (!strategy || !variant) throw ParseError("report: unknown strategy or variant", line_no);
    const std::size_t k = parse_count(f[2], line_no);
    if (first_row) {
      report.strategy = *strategy;
      report.variant = *variant;
      report.budget = k;
      first_row = false;
    } else if (*strategy != report.strategy || *variant != report.variant || k != report.budget) {
      throw ParseError("report: mixed strategy/variant/k in one file", line_no);
    }
    CascadeEstimate row{std::string(f[3]), parse_count(f[4], line_no), parse_count(f[5], line_no),
                        parse_count(f[6], line_no)};
    report.total_original += row.original_size;
    report.total_estimated += row.estimated_size;
    report.per_cascade.push_back(std::move(row));
  }
  if (in.bad()) throw InputError("report: read error");
  if (!header) throw ParseError("report: empty file", line_no);
  return report;
}

EstimateReport read_report_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return read_report_csv(in);
}

}  // namespace linkdel
