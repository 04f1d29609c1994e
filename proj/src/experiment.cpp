#include "linkdel/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "linkdel/errors.hpp"
#include "linkdel/parallel.hpp"

namespace linkdel {

namespace {

std::vector<std::string_view> split_list(std::string_view list) {
  std::vector<std::string_view> items;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t pos = std::min(list.find(',', start), list.size());
    std::string_view item = list.substr(start, pos - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) items.push_back(item);
    start = pos + 1;
  }
  return items;
}

// Rethrows the active exception with `stage` prepended, keeping its category.
[[noreturn]] void rethrow_in_stage(std::string_view stage) {
  const std::string prefix = "[" + std::string(stage) + "] ";
  try {
    throw;
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(prefix + e.what(), e.best_residual(), e.iterations());
  } catch (const InputError& e) {
    throw InputError(prefix + e.what());
  } catch (const InvariantError& e) {
    throw InvariantError(prefix + e.what());
  }
}

template <typename Fn>
auto in_stage(std::string_view stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConvergenceError&) {
    rethrow_in_stage(stage);
  } catch (const InputError&) {
    rethrow_in_stage(stage);
  } catch (const InvariantError&) {
    rethrow_in_stage(stage);
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

}  // namespace

std::vector<Strategy> parse_strategies(std::string_view list) {
  std::vector<Strategy> out;
  for (auto item : split_list(list)) {
    const auto s = parse_strategy(item);
    if (!s) throw InputError("unknown strategy '" + std::string(item) + "'");
    if (std::find(out.begin(), out.end(), *s) == out.end()) out.push_back(*s);
  }
  return out;
}

std::vector<Variant> parse_variants(std::string_view list) {
  std::vector<Variant> out;
  for (auto item : split_list(list)) {
    const auto v = parse_variant(item);
    if (!v) throw InputError("unknown variant '" + std::string(item) + "'");
    if (std::find(out.begin(), out.end(), *v) == out.end()) out.push_back(*v);
  }
  return out;
}

std::vector<double> parse_fractions(std::string_view list) {
  std::vector<double> out;
  for (auto item : split_list(list)) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw InputError("bad budget fraction '" + std::string(item) + "'");
    }
    out.push_back(v);
  }
  return out;
}

void ExperimentConfig::normalize() {
  if (strategies.empty()) throw InputError("no strategies selected");
  if (variants.empty()) throw InputError("no variants selected");
  if (budget_fractions.empty()) throw InputError("no budget fractions given");
  for (double f : budget_fractions) {
    if (!(f >= 0.0 && f <= 1.0)) throw InputError("budget fraction " + format_fraction(f) + " outside [0, 1]");
  }
  std::sort(budget_fractions.begin(), budget_fractions.end());
  budget_fractions.erase(std::unique(budget_fractions.begin(), budget_fractions.end()), budget_fractions.end());
  if (threads == 0) threads = 1;
}

std::size_t budget_for_fraction(double fraction, std::size_t edge_count) {
  const double k = std::floor(fraction * static_cast<double>(edge_count) + 0.5);
  return std::min(edge_count, static_cast<std::size_t>(std::max(k, 0.0)));
}

std::string format_fraction(double fraction) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, fraction);
  return std::string(buf, ptr);
}

Dataset load_dataset(const ExperimentConfig& config) {
  Dataset data;
  auto edges = in_stage("load-edges", [&] { return load_follow_edges(config.edges_path, config.strict_parse); });
  data.malformed_edge_lines = edges.malformed_lines;
  data.raw_edges = std::move(edges.edges);
  data.network = in_stage("build-graph", [&] { return build_graph(data.raw_edges); });

  auto cascades = in_stage("load-cascades", [&] { return load_cascades(config.cascades_path, config.strict_parse); });
  data.malformed_cascade_lines = cascades.malformed_lines;
  data.duplicate_events = cascades.duplicate_events;
  data.all_logs = std::move(cascades.logs);
  data.logs = filter_cascades(data.all_logs, config.min_cascade_size);
  data.uncovered_users = count_uncovered_users(data.network, data.logs);
  return data;
}

namespace {

DeletionPlan obtain_plan(const ExperimentConfig& config, const Dataset& data, Strategy strategy,
                         std::size_t k, const std::filesystem::path& plan_path) {
  if (std::filesystem::exists(plan_path)) {
    try {
      DeletionPlan cached = read_plan(plan_path, data.network);
      const bool seed_ok = strategy != Strategy::Random || cached.rng_seed == config.rng_seed;
      if (cached.strategy == strategy && seed_ok && cached.size() >= k) return cached;
    } catch (const InputError&) {
      // Stale or foreign cache: recompute below and overwrite it.
    }
  }
  PlanOptions options;
  options.eigen = config.eigen;
  options.threads = config.threads;
  options.rng_seed = config.rng_seed;
  DeletionPlan plan = make_plan(data.network, strategy, k, options);
  write_plan(plan_path, plan, data.network);
  return plan;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config) {
  ExperimentConfig normalized = config;
  normalized.normalize();
  const Dataset data = load_dataset(normalized);
  return run_sweep(normalized, data);
}

SweepResult run_sweep(const ExperimentConfig& config_in, const Dataset& data) {
  ExperimentConfig config = config_in;
  config.normalize();
  const std::size_t m = data.network.edge_count();

  std::vector<std::size_t> budgets;
  for (double f : config.budget_fractions) budgets.push_back(budget_for_fraction(f, m));
  const std::size_t max_budget = budgets.empty() ? 0 : budgets.back();

  const auto plan_dir = config.out_dir / "plans";
  const auto estimate_dir = config.out_dir / "estimates";
  in_stage("prepare-output", [&] {
    std::error_code ec;
    std::filesystem::create_directories(plan_dir, ec);
    if (!ec) std::filesystem::create_directories(estimate_dir, ec);
    if (ec) throw InputError("cannot create output directory " + config.out_dir.string() + ": " + ec.message());
  });

  SweepResult result;
  for (Strategy strategy : config.strategies) {
    const std::string sname(to_string(strategy));
    const auto plan_path = plan_dir / (sname + ".plan");
    const DeletionPlan plan =
        in_stage("plan-" + sname, [&] { return obtain_plan(config, data, strategy, max_budget, plan_path); });
    result.files.push_back(plan_path);

    for (Variant variant : config.variants) {
      const std::string vname(to_string(variant));
      const auto reports = in_stage("estimate-" + sname + "-" + vname, [&] {
        return run_estimation_prefixes(data.network, data.logs, plan, variant, budgets, config.threads);
      });
      for (std::size_t b = 0; b < budgets.size(); ++b) {
        const auto& report = reports[b];
        const auto path = estimate_dir / (sname + "_" + vname + "_k" + std::to_string(report.budget) + ".csv");
        in_stage("write-report", [&] { write_report_csv(path, report); });
        if (std::find(result.files.begin(), result.files.end(), path) == result.files.end()) {
          result.files.push_back(path);
        }
        result.summary.push_back({strategy, variant, report.budget, config.budget_fractions[b],
                                  report.total_estimated, report.total_original});
      }
    }
  }

  const auto summary_path = config.out_dir / "summary.csv";
  in_stage("write-summary", [&] {
    auto out = open_output(summary_path);
    write_summary_csv(out, result.summary);
    if (!out) throw InputError("write failed for " + summary_path.string());
  });
  result.files.push_back(summary_path);
  return result;
}

void write_summary_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "strategy,variant,k,fraction,total_estimated,total_original\n";
  for (const auto& r : rows) {
    out << to_string(r.strategy) << ',' << to_string(r.variant) << ',' << r.budget << ','
        << format_fraction(r.fraction) << ',' << r.total_estimated << ',' << r.total_original << '\n';
  }
}

std::vector<SeedRow> seed_analysis(const DirectedGraph& network, std::span<const CascadeLog> logs,
                                   std::size_t max_size, unsigned threads) {
  std::vector<const CascadeLog*> selected;
  for (const auto& log : logs) {
    if (log.size() <= max_size) selected.push_back(&log);
  }
  std::vector<SeedRow> rows(selected.size());
  parallel_for(selected.size(), threads, [&](std::size_t i) {
    const DiffusionGraph dg = build_non_tree(network, *selected[i]);
    rows[i] = {dg.cascade_id, dg.size(), dg.seeds.size()};
  });
  return rows;
}

void write_seed_csv(std::ostream& out, std::span<const SeedRow> rows) {
  out << "cascade_id,original_size,seed_count\n";
  for (const auto& r : rows) out << r.cascade_id << ',' << r.original_size << ',' << r.seed_count << '\n';
}

std::vector<ScatterRow> scatter_report(const EstimateReport& report) {
  std::vector<ScatterRow> rows;
  rows.reserve(report.per_cascade.size());
  for (const auto& r : report.per_cascade) rows.push_back({r.cascade_id, r.original_size, r.estimated_size});
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ScatterRow& a, const ScatterRow& b) { return a.cascade_id < b.cascade_id; });
  return rows;
}

void write_scatter_csv(std::ostream& out, std::span<const ScatterRow> rows) {
  out << "cascade_id,original_size,estimated_size\n";
  for (const auto& r : rows) out << r.cascade_id << ',' << r.original_size << ',' << r.estimated_size << '\n';
}

void write_gnuplot_script(std::ostream& out, const std::filesystem::path& summary_csv,
                          std::span<const Strategy> strategies, std::span<const Variant> variants) {
  out << "# gnuplot script; run: gnuplot -p <this file>\n";
  out << "set datafile separator ','\n";
  out << "set xlabel 'number of deleted links'\n";
  out << "set ylabel 'total cascade size'\n";
  out << "set yrange [0:*]\n";
  out << "summary = '" << summary_csv.generic_string() << "'\n";
  out << "set multiplot layout 1," << std::max<std::size_t>(variants.size(), 1) << "\n";
  for (Variant v : variants) {
    out << "set title '" << to_string(v) << "'\n";
    out << "plot ";
    for (std::size_t i = 0; i < strategies.size(); ++i) {
      if (i) out << ", \\\n     ";
      out << "summary every ::1 using (strcol(1) eq '" << to_string(strategies[i]) << "' && strcol(2) eq '"
          << to_string(v) << "' ? $3 : NaN):5 with linespoints title '" << to_string(strategies[i]) << "'";
    }
    out << "\n";
  }
  out << "unset multiplot\n";
}

}  // namespace linkdel
