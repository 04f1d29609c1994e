// linkdel: command-line front end for cascade-size estimation under link
// deletion. Exit codes: 0 success, 1 input error, 2 convergence error,
// 3 internal invariant violation.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "linkdel/deletion.hpp"
#include "linkdel/diffusion.hpp"
#include "linkdel/errors.hpp"
#include "linkdel/estimator.hpp"
#include "linkdel/experiment.hpp"
#include "linkdel/ingest.hpp"

namespace {

using namespace linkdel;

enum ExitCode { kOk = 0, kInputError = 1, kConvergenceError = 2, kInvariantError = 3 };

struct Options {
  std::string edges;
  std::string cascades;
  std::size_t min_size = 100;
  std::vector<std::string> strategies{"netmelt", "betweenness", "edge-degree", "random"};
  std::vector<std::string> variants{"non-tree", "tree-first", "tree-last"};
  std::vector<std::string> fractions{"0.05", "0.1", "0.15", "0.2", "0.25", "0.3", "0.35", "0.4", "0.45", "0.5"};
  std::uint64_t seed = 0;
  std::string out = "out";
  bool strict_parse = false;
  unsigned threads = 1;
  double eig_tol = 1e-9;
  int eig_max_iter = 10000;
};

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) out += (out.empty() ? "" : ",") + item;
  return out;
}

ExperimentConfig to_config(const Options& o) {
  ExperimentConfig c;
  c.edges_path = o.edges;
  c.cascades_path = o.cascades;
  c.out_dir = o.out;
  c.min_cascade_size = o.min_size;
  c.strategies = parse_strategies(join(o.strategies));
  c.variants = parse_variants(join(o.variants));
  c.budget_fractions = parse_fractions(join(o.fractions));
  c.rng_seed = o.seed;
  c.strict_parse = o.strict_parse;
  c.threads = o.threads;
  c.eigen.tolerance = o.eig_tol;
  c.eigen.max_iterations = o.eig_max_iter;
  c.normalize();
  if (c.edges_path.empty()) throw InputError("--edges is required");
  if (c.cascades_path.empty()) throw InputError("--cascades is required");
  return c;
}

// Writes to `path`, or stdout when empty.
template <typename Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  fn(out);
  if (!out) throw InputError("write failed for " + path);
}

void report_coverage(const Dataset& data) {
  std::cerr << "network: " << data.network.node_count() << " nodes, " << data.network.edge_count()
            << " edges; cascades kept: " << data.logs.size() << " of " << data.all_logs.size() << "\n";
  if (data.malformed_edge_lines || data.malformed_cascade_lines) {
    std::cerr << "warning: skipped " << data.malformed_edge_lines << " malformed edge lines and "
              << data.malformed_cascade_lines << " malformed cascade lines\n";
  }
  if (data.uncovered_users) {
    std::cerr << "warning: " << data.uncovered_users
              << " cascade users are absent from the follow network; they become isolated seeds\n";
  }
}

int cmd_stats(const Options& o) {
  const auto config = to_config(o);
  const Dataset data = load_dataset(config);
  const DatasetStats stats = compute_stats(data.raw_edges, data.logs);
  std::cout << "user_count=" << stats.user_count << "\n"
            << "link_count=" << stats.link_count << "\n"
            << "cascade_count=" << stats.cascade_count << "\n"
            << "mean_cascade_size=" << stats.mean_cascade_size << "\n"
            << "network_node_count=" << data.network.node_count() << "\n"
            << "cascades_before_filter=" << data.all_logs.size() << "\n"
            << "uncovered_users=" << data.uncovered_users << "\n"
            << "malformed_edge_lines=" << data.malformed_edge_lines << "\n"
            << "malformed_cascade_lines=" << data.malformed_cascade_lines << "\n"
            << "duplicate_events=" << data.duplicate_events << "\n";
  return kOk;
}

int cmd_plan(const Options& o, std::optional<std::size_t> k_override) {
  auto config = to_config(o);
  const Dataset data = load_dataset(config);
  const std::size_t m = data.network.edge_count();
  const std::size_t k = k_override ? std::min(*k_override, m) : budget_for_fraction(config.budget_fractions.back(), m);
  const auto dir = config.out_dir / "plans";
  std::filesystem::create_directories(dir);
  PlanOptions options;
  options.eigen = config.eigen;
  options.threads = config.threads;
  options.rng_seed = config.rng_seed;
  for (Strategy s : config.strategies) {
    const DeletionPlan plan = make_plan(data.network, s, k, options);
    const auto path = dir / (std::string(to_string(s)) + ".plan");
    write_plan(path, plan, data.network);
    std::cout << path.string() << "\n";
  }
  return kOk;
}

int cmd_sweep(const Options& o) {
  const auto config = to_config(o);
  const Dataset data = load_dataset(config);
  report_coverage(data);
  const SweepResult result = run_sweep(config, data);
  write_summary_csv(std::cout, result.summary);
  return kOk;
}

int cmd_seeds(const Options& o, std::size_t max_size, const std::string& output) {
  const auto config = to_config(o);
  const Dataset data = load_dataset(config);
  const auto rows = seed_analysis(data.network, data.logs, max_size, config.threads);
  emit(output, [&](std::ostream& out) { write_seed_csv(out, rows); });
  return kOk;
}

int cmd_scatter(const Options& o, const std::string& report_path, double fraction, const std::string& output) {
  EstimateReport report;
  if (!report_path.empty()) {
    report = read_report_csv(std::filesystem::path(report_path));
  } else {
    auto config = to_config(o);
    const Dataset data = load_dataset(config);
    const Strategy strategy = config.strategies.front();
    const Variant variant = config.variants.front();
    const std::size_t k = budget_for_fraction(fraction, data.network.edge_count());
    PlanOptions options;
    options.eigen = config.eigen;
    options.threads = config.threads;
    options.rng_seed = config.rng_seed;
    const DeletionPlan plan = make_plan(data.network, strategy, k, options);
    report = run_estimation(data.network, data.logs, plan, variant, config.threads);
  }
  const auto rows = scatter_report(report);
  emit(output, [&](std::ostream& out) { write_scatter_csv(out, rows); });
  return kOk;
}

int cmd_export_dot(const Options& o, const std::string& cascade_id, const std::string& plan_path,
                   const std::string& output) {
  auto config = to_config(o);
  config.min_cascade_size = 0;
  const Dataset data = load_dataset(config);
  const CascadeLog* log = nullptr;
  for (const auto& l : data.logs) {
    if (l.cascade_id == cascade_id) log = &l;
  }
  if (!log) throw InputError("no cascade with id '" + cascade_id + "'");
  const DiffusionGraph dg = build_diffusion(data.network, *log, config.variants.front());
  std::vector<bool> removed;
  if (!plan_path.empty()) {
    const auto mask = read_plan(std::filesystem::path(plan_path), data.network).mask();
    removed.resize(dg.graph.edge_count());
    for (EdgeId e = 0; e < removed.size(); ++e) removed[e] = mask[dg.follow_edges[e]];
  }
  emit(output, [&](std::ostream& out) { write_dot(out, dg, removed); });
  return kOk;
}

int cmd_gnuplot(const Options& o, const std::string& summary, const std::string& output) {
  const auto strategies = parse_strategies(join(o.strategies));
  const auto variants = parse_variants(join(o.variants));
  const std::filesystem::path path = summary.empty() ? std::filesystem::path(o.out) / "summary.csv" : std::filesystem::path(summary);
  emit(output, [&](std::ostream& out) { write_gnuplot_script(out, path, strategies, variants); });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Estimate retweet-cascade sizes after deleting follow links"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Flat key=value file with the same keys as the flags; flags win");

  Options o;
  app.add_option("--edges", o.edges, "Follow-edge file (follower<TAB>followee)");
  app.add_option("--cascades", o.cascades, "Cascade file (cascade_id<TAB>user_id<TAB>timestamp)");
  app.add_option("--min-size", o.min_size, "Keep cascades with at least this many users")->capture_default_str();
  app.add_option("--strategies", o.strategies, "Comma list of netmelt,betweenness,edge-degree,random")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--variants", o.variants, "Comma list of non-tree,tree-first,tree-last")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--fractions", o.fractions, "Comma list of budget fractions of |E|")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--seed", o.seed, "Seed for the random strategy")->capture_default_str();
  app.add_option("--out", o.out, "Output directory")->capture_default_str();
  app.add_flag("--strict-parse", o.strict_parse, "Fail on the first malformed input line");
  app.add_option("--threads", o.threads, "Worker threads")->capture_default_str();
  app.add_option("--eig-tol", o.eig_tol, "Power-iteration residual tolerance")->capture_default_str();
  app.add_option("--eig-max-iter", o.eig_max_iter, "Power-iteration iteration cap")->capture_default_str();

  auto* stats = app.add_subcommand("stats", "Dataset statistics after the size filter");
  auto* plan = app.add_subcommand("plan", "Compute deletion plans into <out>/plans");
  std::optional<std::size_t> plan_k;
  plan->add_option("--k", plan_k, "Budget in edges (default: largest fraction)");
  auto* sweep = app.add_subcommand("sweep", "Run the budget sweep and write report CSVs");
  auto* seeds = app.add_subcommand("seeds", "Original size vs seed count per cascade");
  std::size_t max_size = 1000;
  std::string output;
  seeds->add_option("--max-size", max_size, "Only cascades up to this size")->capture_default_str();
  seeds->add_option("-o,--output", output, "Output file (default stdout)");
  auto* scatter = app.add_subcommand("scatter", "Original vs estimated size per cascade");
  std::string report_path;
  double fraction = 0.5;
  scatter->add_option("--report", report_path, "Estimate report CSV to project");
  scatter->add_option("--fraction", fraction, "Budget fraction when computing (first strategy/variant)")
      ->capture_default_str();
  scatter->add_option("-o,--output", output, "Output file (default stdout)");
  auto* dot = app.add_subcommand("export-dot", "Write one cascade's diffusion graph as DOT");
  std::string cascade_id;
  std::string dot_plan;
  dot->add_option("--cascade", cascade_id, "Cascade id")->required();
  dot->add_option("--plan", dot_plan, "Plan file; its deleted links are drawn dashed");
  dot->add_option("-o,--output", output, "Output file (default stdout)");
  auto* gnuplot = app.add_subcommand("gnuplot", "Emit a gnuplot script for <out>/summary.csv");
  std::string summary;
  gnuplot->add_option("--summary", summary, "Summary CSV (default <out>/summary.csv)");
  gnuplot->add_option("-o,--output", output, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (stats->parsed()) return cmd_stats(o);
    if (plan->parsed()) return cmd_plan(o, plan_k);
    if (sweep->parsed()) return cmd_sweep(o);
    if (seeds->parsed()) return cmd_seeds(o, max_size, output);
    if (scatter->parsed()) return cmd_scatter(o, report_path, fraction, output);
    if (dot->parsed()) return cmd_export_dot(o, cascade_id, dot_plan, output);
    if (gnuplot->parsed()) return cmd_gnuplot(o, summary, output);
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConvergenceError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const InvariantError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInvariantError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInvariantError;
  }
  return kInputError;
}
