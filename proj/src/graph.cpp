#include "linkdel/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "linkdel/errors.hpp"

namespace linkdel {

DirectedGraph DirectedGraph::from_labeled_edges(std::span<const LabeledEdge> edges) {
  std::vector<std::string> labels;
  labels.reserve(edges.size() * 2);
  for (const auto& [src, dst] : edges) {
    labels.push_back(src);
    labels.push_back(dst);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  DirectedGraph g;
  g.index_.reserve(labels.size());
  for (NodeId i = 0; i < labels.size(); ++i) g.index_.emplace(labels[i], i);
  g.labels_ = std::move(labels);

  std::vector<Edge> dense;
  dense.reserve(edges.size());
  for (const auto& [src, dst] : edges) {
    dense.push_back({g.index_.at(src), g.index_.at(dst)});
  }
  g.assemble(std::move(dense));
  return g;
}

DirectedGraph DirectedGraph::from_dense(std::size_t node_count, std::span<const Edge> edges,
                                        std::vector<std::string> labels) {
  if (labels.empty()) {
    labels.reserve(node_count);
    for (std::size_t i = 0; i < node_count; ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != node_count) {
    throw InputError("label count does not match node count");
  }
  for (const Edge& e : edges) {
    if (e.src >= node_count || e.dst >= node_count) {
      throw InputError("edge endpoint outside node range");
    }
  }
  DirectedGraph g;
  g.index_.reserve(node_count);
  for (NodeId i = 0; i < node_count; ++i) {
    if (!g.index_.emplace(labels[i], i).second) {
      throw InputError("duplicate node label '" + labels[i] + "'");
    }
  }
  g.labels_ = std::move(labels);
  g.assemble({edges.begin(), edges.end()});
  return g;
}

void DirectedGraph::assemble(std::vector<Edge> edges) {
  std::erase_if(edges, [](const Edge& e) { return e.src == e.dst; });
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  const std::size_t n = labels_.size();
  const std::size_t m = edges.size();
  out_offsets_.assign(n + 1, 0);
  in_offsets_.assign(n + 1, 0);
  targets_.resize(m);
  edge_src_.resize(m);
  for (std::size_t e = 0; e < m; ++e) {
    ++out_offsets_[edges[e].src + 1];
    ++in_offsets_[edges[e].dst + 1];
    targets_[e] = edges[e].dst;
    edge_src_[e] = edges[e].src;
  }
  std::partial_sum(out_offsets_.begin(), out_offsets_.end(), out_offsets_.begin());
  std::partial_sum(in_offsets_.begin(), in_offsets_.end(), in_offsets_.begin());

  // Edges are sorted by src, so each reverse bucket fills in src order.
  sources_.resize(m);
  in_edge_ids_.resize(m);
  std::vector<EdgeId> cursor(in_offsets_.begin(), in_offsets_.end() - 1);
  for (std::size_t e = 0; e < m; ++e) {
    const EdgeId slot = cursor[edges[e].dst]++;
    sources_[slot] = edges[e].src;
    in_edge_ids_[slot] = static_cast<EdgeId>(e);
  }
}

std::optional<EdgeId> DirectedGraph::find_edge(NodeId src, NodeId dst) const {
  if (src >= node_count() || dst >= node_count()) return std::nullopt;
  const auto succ = successors(src);
  const auto it = std::lower_bound(succ.begin(), succ.end(), dst);
  if (it == succ.end() || *it != dst) return std::nullopt;
  return static_cast<EdgeId>(out_offsets_[src] + (it - succ.begin()));
}

std::optional<NodeId> DirectedGraph::find(std::string_view label) const {
  const auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<NodeId> reachable_from(const DirectedGraph& graph, std::span<const NodeId> sources) {
  return reachable_from(graph, sources, {});
}

std::vector<NodeId> reachable_from(const DirectedGraph& graph, std::span<const NodeId> sources,
                                   const std::vector<bool>& removed) {
  const std::size_t n = graph.node_count();
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack;
  std::vector<NodeId> out;
  for (NodeId s : sources) {
    if (s >= n) throw InputError("source node " + std::to_string(s) + " not in graph");
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    out.push_back(v);
    const auto succ = graph.successors(v);
    const EdgeId base = graph.first_out_edge(v);
    for (std::size_t i = 0; i < succ.size(); ++i) {
      if (!removed.empty() && removed[base + i]) continue;
      const NodeId w = succ[i];
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Brandes single-source pass over sources [first, last), accumulating into
// `scores`.
void accumulate_betweenness(const DirectedGraph& g, NodeId first, NodeId last,
                            std::vector<double>& scores) {
  const std::size_t n = g.node_count();
  std::vector<std::int64_t> dist(n, -1);
  std::vector<double> sigma(n, 0.0);
  std::vector<double> delta(n, 0.0);
  std::vector<NodeId> order;
  order.reserve(n);

  for (NodeId s = first; s < last; ++s) {
    order.clear();
    dist[s] = 0;
    sigma[s] = 1.0;
    order.push_back(s);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const NodeId v = order[head];
      for (NodeId w : g.successors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          order.push_back(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeId w = *it;
      const auto preds = g.predecessors(w);
      const auto ids = g.in_edge_ids(w);
      for (std::size_t i = 0; i < preds.size(); ++i) {
        const NodeId v = preds[i];
        if (dist[v] != dist[w] - 1) continue;
        const double c = sigma[v] / sigma[w] * (1.0 + delta[w]);
        scores[ids[i]] += c;
        delta[v] += c;
      }
    }
    for (NodeId v : order) {
      dist[v] = -1;
      sigma[v] = 0.0;
      delta[v] = 0.0;
    }
  }
}

}  // namespace

std::vector<double> edge_betweenness(const DirectedGraph& graph, unsigned threads) {
  const std::size_t n = graph.node_count();
  const std::size_t m = graph.edge_count();
  const std::size_t blocks = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  if (blocks == 1) {
    std::vector<double> scores(m, 0.0);
    accumulate_betweenness(graph, 0, static_cast<NodeId>(n), scores);
    return scores;
  }

  std::vector<std::vector<double>> partial(blocks, std::vector<double>(m, 0.0));
  {
    std::vector<std::jthread> workers;
    for (std::size_t b = 0; b < blocks; ++b) {
      const auto first = static_cast<NodeId>(n * b / blocks);
      const auto last = static_cast<NodeId>(n * (b + 1) / blocks);
      workers.emplace_back(
          [&graph, &partial, b, first, last] { accumulate_betweenness(graph, first, last, partial[b]); });
    }
  }
  std::vector<double> scores(m, 0.0);
  for (const auto& p : partial) {
    for (std::size_t e = 0; e < m; ++e) scores[e] += p[e];
  }
  return scores;
}

bool has_cycle(const DirectedGraph& graph) {
  // Kahn: a cycle exists iff some node never reaches in-degree zero.
  const std::size_t n = graph.node_count();
  std::vector<std::size_t> indeg(n);
  std::vector<NodeId> ready;
  for (NodeId v = 0; v < n; ++v) {
    indeg[v] = graph.in_degree(v);
    if (indeg[v] == 0) ready.push_back(v);
  }
  std::size_t removed = 0;
  while (!ready.empty()) {
    const NodeId v = ready.back();
    ready.pop_back();
    ++removed;
    for (NodeId w : graph.successors(v)) {
      if (--indeg[w] == 0) ready.push_back(w);
    }
  }
  return removed != n;
}

namespace {

double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// y = A x (transpose = false) or y = A^T x (transpose = true).
void multiply(const DirectedGraph& g, bool transpose, const std::vector<double>& x,
              std::vector<double>& y) {
  const std::size_t n = g.node_count();
  for (NodeId v = 0; v < n; ++v) {
    double acc = 0.0;
    for (NodeId w : transpose ? g.predecessors(v) : g.successors(v)) acc += x[w];
    y[v] = acc;
  }
}

struct PowerResult {
  std::vector<double> vector;
  double eigenvalue = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

PowerResult power_iterate(const DirectedGraph& g, bool transpose, const EigenOptions& options) {
  const std::size_t n = g.node_count();
  PowerResult r;
  r.vector.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
  r.residual = std::numeric_limits<double>::infinity();
  std::vector<double> y(n);
  for (int it = 1; it <= options.max_iterations; ++it) {
    multiply(g, transpose, r.vector, y);
    const double lambda = norm2(y);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = y[i] - lambda * r.vector[i];
      res += d * d;
    }
    res = std::sqrt(res);
    r.iterations = it;
    r.eigenvalue = lambda;
    r.residual = std::min(r.residual, res);
    if (res <= options.tolerance) {
      r.residual = res;
      r.converged = true;
      return r;
    }
    for (std::size_t i = 0; i < n; ++i) y[i] += r.vector[i];
    const double scale = 1.0 / norm2(y);
    for (std::size_t i = 0; i < n; ++i) r.vector[i] = y[i] * scale;
  }
  return r;
}

}  // namespace

EigenPair leading_eigenpair(const DirectedGraph& graph, const EigenOptions& options) {
  if (graph.edge_count() == 0) throw InputError("leading eigenpair needs at least one edge");
  if (!(options.tolerance > 0.0)) throw InputError("eigen tolerance must be positive");
  const std::size_t n = graph.node_count();

  EigenPair pair;
  if (!has_cycle(graph)) {
    // Nilpotent: A e_s = 0 for any s with in-degree 0, A^T e_t = 0 for any
    // t with out-degree 0.
    pair.right.assign(n, 0.0);
    pair.left.assign(n, 0.0);
    NodeId source = 0;
    while (graph.in_degree(source) != 0) ++source;
    NodeId sink = 0;
    while (graph.out_degree(sink) != 0) ++sink;
    pair.right[source] = 1.0;
    pair.left[sink] = 1.0;
    return pair;
  }

  PowerResult right = power_iterate(graph, false, options);
  if (!right.converged) {
    throw ConvergenceError("power iteration (right vector) did not converge, best residual " +
                               std::to_string(right.residual),
                           right.residual, right.iterations);
  }
  PowerResult left = power_iterate(graph, true, options);
  if (!left.converged) {
    throw ConvergenceError("power iteration (left vector) did not converge, best residual " +
                               std::to_string(left.residual),
                           left.residual, left.iterations);
  }
  pair.eigenvalue = right.eigenvalue;
  pair.right = std::move(right.vector);
  pair.left = std::move(left.vector);
  pair.iterations = std::max(right.iterations, left.iterations);
  pair.residual = right.residual;
  return pair;
}

}  // namespace linkdel
