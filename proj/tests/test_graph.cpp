#include <doctest.h>

#include <numeric>

#include "linkdel/errors.hpp"
#include "linkdel/graph.hpp"
#include "oracles.hpp"

using namespace linkdel;

namespace {

std::vector<NodeId> as_vector(const std::set<NodeId>& s) { return {s.begin(), s.end()}; }

DirectedGraph labeled(std::initializer_list<LabeledEdge> edges) {
  const std::vector<LabeledEdge> v(edges);
  return build_graph(v);
}

std::vector<Edge> graph_edges(const DirectedGraph& g) {
  std::vector<Edge> out;
  for (EdgeId e = 0; e < g.edge_count(); ++e) out.push_back(g.edge(e));
  return out;
}

}  // namespace

TEST_CASE("build_graph drops duplicates and self-loops") {
  SUBCASE("empty") {
    const auto g = labeled({});
    CHECK(g.node_count() == 0);
    CHECK(g.edge_count() == 0);
  }
  SUBCASE("dedup") {
    const auto g = labeled({{"a", "b"}, {"a", "b"}, {"b", "b"}});
    CHECK(g.node_count() == 2);
    REQUIRE(g.edge_count() == 1);
    CHECK(g.label(g.edge(0).src) == "a");
    CHECK(g.label(g.edge(0).dst) == "b");
  }
  SUBCASE("worked example edge set") {
    const auto follows = oracle::example_follows();
    const auto g = build_graph(follows);
    CHECK(g.node_count() == 8);
    CHECK(g.edge_count() == 8);
  }
  SUBCASE("ids follow label order regardless of input order") {
    const auto g1 = labeled({{"z", "a"}, {"m", "z"}});
    const auto g2 = labeled({{"m", "z"}, {"z", "a"}});
    CHECK(g1.labels() == std::vector<std::string>{"a", "m", "z"});
    CHECK(graph_edges(g1) == graph_edges(g2));
  }
}

TEST_CASE("forward and reverse adjacency agree") {
  oracle::Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    auto edges = oracle::random_digraph(n, 0.15, rng);
    edges.push_back(edges.empty() ? Edge{0, 0} : edges.front());  // a duplicate
    const auto g = DirectedGraph::from_dense(n, edges);

    std::size_t out_sum = 0;
    std::size_t in_sum = 0;
    std::set<Edge> forward;
    std::set<Edge> reverse;
    for (NodeId v = 0; v < n; ++v) {
      out_sum += g.out_degree(v);
      in_sum += g.in_degree(v);
      for (NodeId w : g.successors(v)) forward.insert({v, w});
      const auto preds = g.predecessors(v);
      const auto ids = g.in_edge_ids(v);
      for (std::size_t i = 0; i < preds.size(); ++i) {
        reverse.insert({preds[i], v});
        CHECK(g.edge(ids[i]) == Edge{preds[i], v});
      }
    }
    CHECK(out_sum == g.edge_count());
    CHECK(in_sum == g.edge_count());
    CHECK(forward == reverse);
    CHECK(forward.size() == g.edge_count());
    for (const Edge& e : forward) {
      CHECK(e.src != e.dst);
      REQUIRE(g.find_edge(e.src, e.dst).has_value());
      CHECK(g.edge(*g.find_edge(e.src, e.dst)) == e);
    }
  }
}

TEST_CASE("reachable_from") {
  SUBCASE("worked example after deletion") {
    // Diffusion-direction graph with (1,5) and (3,6) removed.
    const auto g = labeled({{"1", "2"}, {"2", "3"}, {"4", "5"}, {"5", "3"}, {"6", "7"}, {"6", "8"}});
    const std::vector<NodeId> seeds{*g.find("1"), *g.find("4")};
    std::vector<std::string> got;
    for (NodeId v : reachable_from(g, seeds)) got.push_back(g.label(v));
    CHECK(got == std::vector<std::string>{"1", "2", "3", "4", "5"});
  }
  SUBCASE("all nodes as sources") {
    oracle::Rng rng(3);
    const auto g = DirectedGraph::from_dense(12, oracle::random_digraph(12, 0.1, rng));
    std::vector<NodeId> all(12);
    std::iota(all.begin(), all.end(), 0);
    CHECK(reachable_from(g, all) == all);
  }
  SUBCASE("unknown node") {
    const auto g = labeled({{"a", "b"}});
    const std::vector<NodeId> bad{5};
    CHECK_THROWS_AS(reachable_from(g, bad), InputError);
  }
  SUBCASE("random DAGs match transitive closure") {
    oracle::Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = 30;
      const auto edges = oracle::random_dag(n, 0.08, rng);
      const auto g = DirectedGraph::from_dense(n, edges);
      std::vector<NodeId> sources;
      for (NodeId v = 0; v < n; ++v) {
        if (rng() % 7 == 0) sources.push_back(v);
      }
      CHECK(reachable_from(g, sources) == as_vector(oracle::closure_reach(oracle::adjacency(n, edges), sources)));
    }
  }
}

TEST_CASE("reachable_from properties: monotone, fixed point, edge removal shrinks") {
  oracle::Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 30;
    const auto g = DirectedGraph::from_dense(n, oracle::random_digraph(n, 0.1, rng));
    std::vector<NodeId> small;
    std::vector<NodeId> large;
    for (NodeId v = 0; v < n; ++v) {
      const auto r = rng() % 4;
      if (r == 0) small.push_back(v);
      if (r <= 1) large.push_back(v);
    }
    const auto rs = reachable_from(g, small);
    const auto rl = reachable_from(g, large);
    CHECK(std::includes(rl.begin(), rl.end(), rs.begin(), rs.end()));
    CHECK(reachable_from(g, rs) == rs);

    std::vector<bool> removed(g.edge_count());
    for (std::size_t e = 0; e < removed.size(); ++e) removed[e] = rng() % 3 == 0;
    const auto reduced = reachable_from(g, large, removed);
    CHECK(std::includes(rl.begin(), rl.end(), reduced.begin(), reduced.end()));
  }
}

TEST_CASE("edge_betweenness") {
  SUBCASE("directed path") {
    const auto g = labeled({{"a", "b"}, {"b", "c"}});
    const auto s = edge_betweenness(g);
    CHECK(s[*g.find_edge(*g.find("a"), *g.find("b"))] == doctest::Approx(2.0));
    CHECK(s[*g.find_edge(*g.find("b"), *g.find("c"))] == doctest::Approx(2.0));
  }
  SUBCASE("directed 4-cycle is symmetric") {
    const auto g = labeled({{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "a"}});
    const auto s = edge_betweenness(g);
    for (double x : s) CHECK(x == doctest::Approx(s.front()));
    // Each edge carries 1 + 2 + 3 pair-lengths out of 4 * 6 total.
    CHECK(s.front() == doctest::Approx(6.0));
  }
  SUBCASE("random digraphs match path-counting oracle") {
    oracle::Rng rng(19);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t n = 2 + rng() % 49;
      const auto edges = oracle::random_digraph(n, 2.5 / static_cast<double>(n), rng);
      const auto g = DirectedGraph::from_dense(n, edges);
      const auto got = edge_betweenness(g);
      const auto want = oracle::brute_betweenness(n, edges);
      double total = 0.0;
      for (EdgeId e = 0; e < g.edge_count(); ++e) {
        CHECK(got[e] == doctest::Approx(want.at(g.edge(e))).epsilon(1e-12));
        total += got[e];
      }
      CHECK(total == doctest::Approx(oracle::total_pair_distance(n, edges)).epsilon(1e-12));
    }
  }
  SUBCASE("threaded result matches single-threaded and is reproducible") {
    oracle::Rng rng(23);
    const auto g = DirectedGraph::from_dense(60, oracle::random_digraph(60, 0.06, rng));
    const auto one = edge_betweenness(g, 1);
    const auto four = edge_betweenness(g, 4);
    CHECK(four == edge_betweenness(g, 4));
    for (std::size_t e = 0; e < one.size(); ++e) CHECK(four[e] == doctest::Approx(one[e]).epsilon(1e-12));
  }
}

TEST_CASE("leading_eigenpair") {
  SUBCASE("2-cycle") {
    const auto g = labeled({{"a", "b"}, {"b", "a"}});
    const auto p = leading_eigenpair(g);
    CHECK(p.eigenvalue == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.residual <= 1e-9);
  }
  SUBCASE("complete digraph") {
    for (std::size_t n : {2u, 3u, 5u, 9u}) {
      std::vector<Edge> edges;
      for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = 0; j < n; ++j) {
          if (i != j) edges.push_back({i, j});
        }
      }
      const auto p = leading_eigenpair(DirectedGraph::from_dense(n, edges));
      CHECK(p.eigenvalue == doctest::Approx(static_cast<double>(n - 1)).epsilon(1e-12));
    }
  }
  SUBCASE("vectors are unit, nonnegative and satisfy the residual bound") {
    oracle::Rng rng(29);
    const std::size_t n = 40;
    const auto g = DirectedGraph::from_dense(n, oracle::random_strongly_connected(n, 0.08, rng));
    const auto p = leading_eigenpair(g);
    double nl = 0.0;
    double nr = 0.0;
    double res_left = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      nl += p.left[v] * p.left[v];
      nr += p.right[v] * p.right[v];
      CHECK(p.left[v] >= 0.0);
      CHECK(p.right[v] >= 0.0);
      double at = 0.0;
      for (NodeId u : g.predecessors(v)) at += p.left[u];
      res_left += (at - p.eigenvalue * p.left[v]) * (at - p.eigenvalue * p.left[v]);
    }
    CHECK(nl == doctest::Approx(1.0));
    CHECK(nr == doctest::Approx(1.0));
    CHECK(p.residual <= 1e-9);
    CHECK(std::sqrt(res_left) <= 1e-9);
  }
  SUBCASE("random digraphs match the dense eigensolver") {
    oracle::Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 5 + rng() % 96;
      const auto edges = oracle::random_strongly_connected(n, 3.0 / static_cast<double>(n), rng);
      const auto p = leading_eigenpair(DirectedGraph::from_dense(n, edges));
      CHECK(std::abs(p.eigenvalue - oracle::dense_spectral_radius(n, edges)) <= 1e-6);
    }
  }
  SUBCASE("periodic graph converges thanks to the shift") {
    // Bipartite-like 2-periodic structure: a<->b, a<->c.
    const auto g = labeled({{"a", "b"}, {"b", "a"}, {"a", "c"}, {"c", "a"}, {"d", "a"}});
    const auto p = leading_eigenpair(g);
    CHECK(p.eigenvalue == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  }
  SUBCASE("acyclic graph has spectral radius zero") {
    const auto g = labeled({{"a", "b"}, {"b", "c"}, {"a", "c"}});
    const auto p = leading_eigenpair(g);
    CHECK(p.eigenvalue == 0.0);
    CHECK(p.residual == 0.0);
    CHECK(p.right[*g.find("a")] == 1.0);  // A e_a = 0: no edge enters a
    CHECK(p.left[*g.find("c")] == 1.0);   // A^T e_c = 0: no edge leaves c
  }
  SUBCASE("relabeling does not change the eigenvalue") {
    oracle::Rng rng(37);
    const std::size_t n = 30;
    const auto edges = oracle::random_strongly_connected(n, 0.1, rng);
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Edge> permuted;
    for (const auto& e : edges) permuted.push_back({perm[e.src], perm[e.dst]});
    const double a = leading_eigenpair(DirectedGraph::from_dense(n, edges)).eigenvalue;
    const double b = leading_eigenpair(DirectedGraph::from_dense(n, permuted)).eigenvalue;
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
  }
  SUBCASE("deleting an edge never increases the eigenvalue") {
    oracle::Rng rng(41);
    const std::size_t n = 25;
    auto edges = oracle::random_strongly_connected(n, 0.12, rng);
    const double before = leading_eigenpair(DirectedGraph::from_dense(n, edges)).eigenvalue;
    for (int trial = 0; trial < 10; ++trial) {
      auto reduced = edges;
      reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(rng() % reduced.size()));
      const double after = leading_eigenpair(DirectedGraph::from_dense(n, reduced)).eigenvalue;
      CHECK(after <= before + 1e-9);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(leading_eigenpair(labeled({})), InputError);
    const auto g = labeled({{"a", "b"}, {"b", "a"}, {"b", "c"}, {"c", "a"}});
    CHECK_THROWS_AS(leading_eigenpair(g, {0.0, 100}), InputError);
    try {
      leading_eigenpair(g, {1e-14, 2});
      FAIL("expected a convergence error");
    } catch (const ConvergenceError& e) {
      CHECK(e.iterations() == 2);
      CHECK(e.best_residual() > 1e-14);
    }
  }
}
