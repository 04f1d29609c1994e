#include <doctest.h>

#include <sstream>

#include "linkdel/errors.hpp"
#include "linkdel/estimator.hpp"
#include "oracles.hpp"

using namespace linkdel;

namespace {

// Follow-edge mask over `network` for the given labeled follow pairs.
std::vector<bool> mask_of(const DirectedGraph& network, const std::vector<LabeledEdge>& follows) {
  std::vector<bool> mask(network.edge_count(), false);
  for (const auto& [a, b] : follows) mask[*network.find_edge(*network.find(a), *network.find(b))] = true;
  return mask;
}

std::set<oracle::LabelPair> diffusion_edges(const DiffusionGraph& dg) {
  std::set<oracle::LabelPair> out;
  for (EdgeId e = 0; e < dg.graph.edge_count(); ++e) {
    out.insert({dg.users[dg.graph.edge(e).src], dg.users[dg.graph.edge(e).dst]});
  }
  return out;
}

std::set<std::string> seed_set(const DiffusionGraph& dg) {
  std::set<std::string> out;
  for (NodeId s : dg.seeds) out.insert(dg.users[s]);
  return out;
}

DeletionPlan manual_plan(const DirectedGraph& network, const std::vector<LabeledEdge>& follows) {
  DeletionPlan plan;
  plan.strategy = Strategy::NetMelt;
  plan.network_edge_count = network.edge_count();
  for (const auto& [a, b] : follows) {
    const NodeId u = *network.find(a);
    const NodeId v = *network.find(b);
    plan.ranked_edges.push_back({*network.find_edge(u, v), {u, v}, 1.0});
  }
  plan.budget = plan.size();
  return plan;
}

}  // namespace

TEST_CASE("worked example after deleting two links") {
  const auto follows = oracle::example_follows();
  const auto network = build_graph(follows);
  const auto log = oracle::example_log();
  // Diffusion edges (1,5) and (3,6) rest on follow edges 5->1 and 6->3.
  const std::vector<LabeledEdge> cut{{"5", "1"}, {"6", "3"}};

  const auto dg = build_non_tree(network, log);
  const auto after = apply_deletion(dg, mask_of(network, cut));
  CHECK(after.graph.edge_count() == 6);
  CHECK(estimate_size(after, dg.seeds) == 5);
  CHECK(estimate_after_deletion(dg, mask_of(network, cut)) == 5);

  const std::vector<CascadeLog> logs{log};
  const auto report = run_estimation(network, logs, manual_plan(network, cut), Variant::NonTree);
  CHECK(report.total_original == 8);
  CHECK(report.total_estimated == 5);
  REQUIRE(report.per_cascade.size() == 1);
  CHECK(report.per_cascade[0].seed_count == 2);
}

TEST_CASE("apply_deletion and estimate_size against oracles") {
  oracle::Rng rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = oracle::random_instance(rng);
    const auto network = build_graph(inst.follows);
    std::vector<bool> mask(network.edge_count(), false);
    std::bernoulli_distribution coin(0.3);
    std::set<oracle::LabelPair> cut_follows;
    for (EdgeId e = 0; e < mask.size(); ++e) {
      mask[e] = coin(rng);
      if (mask[e]) cut_follows.insert({network.label(network.edge(e).src), network.label(network.edge(e).dst)});
    }
    for (Variant v : {Variant::NonTree, Variant::TreeFirst, Variant::TreeLast}) {
      const auto dg = build_diffusion(network, inst.log, v);

      CHECK(diffusion_edges(apply_deletion(dg, std::vector<bool>(mask.size(), false))) == diffusion_edges(dg));
      CHECK(estimate_after_deletion(dg, std::vector<bool>(mask.size(), false)) == dg.size());

      std::set<oracle::LabelPair> expected;
      for (const auto& [u, w] : diffusion_edges(dg)) {
        if (!cut_follows.count({w, u})) expected.insert({u, w});
      }
      const auto after = apply_deletion(dg, mask);
      CHECK(diffusion_edges(after) == expected);
      CHECK(after.users == dg.users);
      CHECK(after.seeds == dg.seeds);

      const std::size_t want = oracle::closure_count(expected, seed_set(dg));
      CHECK(estimate_size(after, dg.seeds) == want);
      CHECK(estimate_after_deletion(dg, mask) == want);
      CHECK(want >= dg.seeds.size());
      CHECK(want <= dg.size());
    }
  }
}

TEST_CASE("estimates shrink with budget and follow variant containment") {
  oracle::Rng rng(63);
  std::vector<LabeledEdge> follows;
  std::vector<CascadeLog> logs;
  for (const auto& e : oracle::random_digraph(40, 0.08, rng)) {
    follows.emplace_back(oracle::user_label(e.src), oracle::user_label(e.dst));
  }
  // Only the cascades are kept; their users overlap the network's labels.
  for (int c = 0; c < 12; ++c) logs.push_back(oracle::random_instance(rng, 40, "c" + std::to_string(c)).log);
  const auto network = build_graph(follows);
  REQUIRE(network.edge_count() > 5);
  const auto plan = make_plan(network, Strategy::Random, network.edge_count(), {.rng_seed = 3});
  std::vector<std::size_t> budgets;
  for (std::size_t k = 0; k <= network.edge_count(); ++k) budgets.push_back(k);

  std::map<Variant, std::vector<EstimateReport>> by_variant;
  for (Variant v : {Variant::NonTree, Variant::TreeFirst, Variant::TreeLast}) {
    by_variant[v] = run_estimation_prefixes(network, logs, plan, v, budgets);
    const auto& reports = by_variant[v];
    REQUIRE(reports.size() == budgets.size());
    CHECK(reports.front().total_estimated == reports.front().total_original);
    for (std::size_t i = 1; i < reports.size(); ++i) {
      CHECK(reports[i].total_estimated <= reports[i - 1].total_estimated);
      for (std::size_t c = 0; c < reports[i].per_cascade.size(); ++c) {
        CHECK(reports[i].per_cascade[c].estimated_size <= reports[i - 1].per_cascade[c].estimated_size);
      }
    }
  }
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    const auto nt = by_variant[Variant::NonTree][i].total_estimated;
    CHECK(by_variant[Variant::TreeFirst][i].total_estimated <= nt);
    CHECK(by_variant[Variant::TreeLast][i].total_estimated <= nt);
    for (Variant v : {Variant::NonTree, Variant::TreeFirst, Variant::TreeLast}) {
      for (const auto& row : by_variant[v][i].per_cascade) CHECK(row.estimated_size >= row.seed_count);
    }
  }
  const auto single = run_estimation(network, logs, plan.prefix(5), Variant::TreeLast);
  CHECK(single.per_cascade == by_variant[Variant::TreeLast][5].per_cascade);
}

TEST_CASE("reports do not depend on thread count or input order") {
  oracle::Rng rng(65);
  const auto inst = oracle::random_instance(rng, 30, "x");
  const auto network = build_graph(inst.follows);
  std::vector<CascadeLog> logs;
  for (int c = 0; c < 25; ++c) {
    CascadeLog log = inst.log;
    log.cascade_id = "id" + std::to_string((c * 7) % 25);
    std::shuffle(log.events.begin(), log.events.end(), rng);
    log.events.resize(1 + rng() % log.events.size());
    logs.push_back(log);
  }
  const auto plan = make_plan(network, Strategy::EdgeDegree, network.edge_count() / 2);
  const auto one = run_estimation(network, logs, plan, Variant::NonTree, 1);
  std::reverse(logs.begin(), logs.end());
  for (unsigned t : {2u, 4u, 7u}) {
    const auto many = run_estimation(network, logs, plan, Variant::NonTree, t);
    CHECK(many.per_cascade == one.per_cascade);
    CHECK(many.total_estimated == one.total_estimated);
  }
  CHECK(std::is_sorted(one.per_cascade.begin(), one.per_cascade.end(),
                       [](const auto& a, const auto& b) { return a.cascade_id < b.cascade_id; }));
}

TEST_CASE("plan built on another network is rejected") {
  const auto follows = oracle::example_follows();
  const auto network = build_graph(follows);
  DeletionPlan plan;
  plan.network_edge_count = network.edge_count() + 1;
  const std::vector<CascadeLog> logs{oracle::example_log()};
  CHECK_THROWS_AS(run_estimation(network, logs, plan, Variant::NonTree), InputError);
}

TEST_CASE("report check") {
  EstimateReport r;
  r.per_cascade = {{"a", 5, 3, 1}};
  r.total_original = 5;
  r.total_estimated = 3;
  CHECK_NOTHROW(r.check());
  r.per_cascade[0].seed_count = 4;
  CHECK_THROWS_AS(r.check(), InvariantError);
  r.per_cascade[0].seed_count = 1;
  r.total_estimated = 2;
  CHECK_THROWS_AS(r.check(), InvariantError);
}

TEST_CASE("report CSV round trip") {
  EstimateReport r;
  r.strategy = Strategy::Betweenness;
  r.variant = Variant::TreeFirst;
  r.budget = 17;
  r.per_cascade = {{"plain", 10, 4, 2}, {"with,comma", 3, 3, 3}};
  r.total_original = 13;
  r.total_estimated = 7;
  std::stringstream buf;
  write_report_csv(buf, r);
  CHECK(buf.str().rfind("strategy,variant,k,cascade_id,original_size,estimated_size,seed_count\n", 0) == 0);
  const auto back = read_report_csv(buf);
  CHECK(back.strategy == r.strategy);
  CHECK(back.variant == r.variant);
  CHECK(back.budget == r.budget);
  CHECK(back.per_cascade == r.per_cascade);
  CHECK(back.total_estimated == 7);

  std::istringstream bad("strategy,variant,k,cascade_id,original_size,estimated_size,seed_count\nrandom,non-tree,1,a,x,1,1\n");
  CHECK_THROWS_AS(read_report_csv(bad), ParseError);
}
