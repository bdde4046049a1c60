#include "searchspace/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "detail.hpp"
#include "searchspace/error.hpp"

namespace searchspace {

namespace detail {

std::vector<std::vector<std::uint32_t>> strongly_connected_components(
    std::size_t n, const std::function<void(std::uint32_t, std::vector<std::uint32_t>&)>& successors) {
  constexpr auto kUnvisited = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::vector<std::vector<std::uint32_t>> components;

  struct Frame {
    std::uint32_t v;
    std::vector<std::uint32_t> succ;
    std::size_t next = 0;
  };
  std::vector<Frame> call;
  std::uint32_t counter = 0;

  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    auto enter = [&](std::uint32_t v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack[v] = true;
      Frame f{v, {}, 0};
      successors(v, f.succ);
      call.push_back(std::move(f));
    };
    enter(root);
    while (!call.empty()) {
      auto& top = call.back();
      if (top.next < top.succ.size()) {
        const auto w = top.succ[top.next++];
        if (index[w] == kUnvisited) {
          enter(w);
        } else if (on_stack[w]) {
          low[top.v] = std::min(low[top.v], index[w]);
        }
        continue;
      }
      const auto v = top.v;
      if (low[v] == index[v]) {
        std::vector<std::uint32_t> comp;
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
      call.pop_back();
      if (!call.empty()) {
        auto& parent = call.back();
        low[parent.v] = std::min(low[parent.v], low[v]);
      }
    }
  }
  return components;
}

PerronBounds perron_bounds(const LocalMatrix& m, int iterations) {
  PerronBounds out;
  out.lower = 0.0;
  out.upper = std::numeric_limits<double>::infinity();
  std::vector<double> x(m.n, 1.0), mx(m.n, 0.0);
  for (int it = 0; it <= iterations; ++it) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < m.n; ++i) {
      double s = 0.0;
      for (auto k = m.row_begin(i); k < m.row_end(i); ++k) s += m.vals[k] * x[m.cols[k]];
      mx[i] = s;
      const double r = s / x[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    out.lower = std::max(out.lower, lo);
    if (hi < out.upper) {
      out.upper = hi;
      out.weights = x;
    }
    if (out.upper - out.lower <= 1e-15 * out.upper) break;
    // x <- (I + M) x, normalized; stays strictly positive.
    double norm = 0.0;
    for (std::size_t i = 0; i < m.n; ++i) {
      x[i] += mx[i];
      norm = std::max(norm, x[i]);
    }
    for (auto& v : x) v /= norm;
  }
  return out;
}

}  // namespace detail

namespace {

NodeId node(std::size_t i) { return NodeId{static_cast<std::uint32_t>(i)}; }

void check_node(const CrispEnvelope& envelope, NodeId id) {
  if (id.index() >= envelope.node_count()) {
    throw ContractError("node id " + std::to_string(id.value) + " outside the graph");
  }
}

}  // namespace

std::vector<std::optional<std::size_t>> distances_from(const CrispEnvelope& envelope, NodeId from) {
  check_node(envelope, from);
  std::vector<std::optional<std::size_t>> dist(envelope.node_count());
  std::deque<NodeId> queue{from};
  dist[from.index()] = 0;
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (const auto v : envelope.row(u)) {
      if (!dist[v.index()]) {
        dist[v.index()] = *dist[u.index()] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

std::optional<std::size_t> shortest_distance(const CrispEnvelope& envelope, NodeId f, NodeId g) {
  check_node(envelope, g);
  return distances_from(envelope, f)[g.index()];
}

BigCount count_shortest_paths(const CrispEnvelope& envelope, NodeId f, NodeId g) {
  check_node(envelope, f);
  check_node(envelope, g);
  const auto n = envelope.node_count();
  std::vector<std::optional<std::size_t>> dist(n);
  std::vector<BigCount> count(n);
  std::deque<NodeId> queue{f};
  dist[f.index()] = 0;
  count[f.index()] = 1;
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    if (u == g) break;  // every predecessor layer of g is complete
    for (const auto v : envelope.row(u)) {
      if (!dist[v.index()]) {
        dist[v.index()] = *dist[u.index()] + 1;
        count[v.index()] = count[u.index()];
        queue.push_back(v);
      } else if (*dist[v.index()] == *dist[u.index()] + 1) {
        count[v.index()] += count[u.index()];
      }
    }
  }
  return count[g.index()];
}

std::vector<std::vector<BigCount>> walk_counts_from(const CrispEnvelope& envelope, NodeId f,
                                                    std::size_t max_length) {
  check_node(envelope, f);
  const auto n = envelope.node_count();
  std::vector<std::vector<BigCount>> table;
  table.reserve(max_length + 1);
  std::vector<BigCount> cur(n);
  cur[f.index()] = 1;
  table.push_back(cur);
  for (std::size_t len = 1; len <= max_length; ++len) {
    std::vector<BigCount> next(n);
    for (std::size_t u = 0; u < n; ++u) {
      if (cur[u].is_zero()) continue;
      for (const auto v : envelope.row(node(u))) next[v.index()] += cur[u];
    }
    cur = std::move(next);
    table.push_back(cur);
  }
  return table;
}

PathCountTable path_counts(const CrispEnvelope& envelope, NodeId f, NodeId g,
                           std::size_t max_length, std::size_t cap) {
  check_node(envelope, g);
  PathCountTable t;
  t.truncated = max_length > cap;
  t.max_length = std::min(max_length, cap);
  auto table = walk_counts_from(envelope, f, t.max_length);
  t.counts.reserve(table.size());
  for (auto& layer : table) t.counts.push_back(std::move(layer[g.index()]));
  return t;
}

std::vector<bool> forward_reachable(const CrispEnvelope& envelope, NodeId start) {
  check_node(envelope, start);
  std::vector<bool> seen(envelope.node_count(), false);
  std::vector<NodeId> stack{start};
  seen[start.index()] = true;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (const auto v : envelope.row(u)) {
      if (!seen[v.index()]) {
        seen[v.index()] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

std::vector<bool> backward_reachable(const CrispEnvelope& envelope, NodeId target) {
  return forward_reachable(envelope.transposed(), target);
}

std::optional<std::vector<NodeId>> topological_order(const CrispEnvelope& envelope) {
  const auto n = envelope.node_count();
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& [f, g] : envelope.edges()) indegree[g.index()]++;
  std::deque<NodeId> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(node(i));
  }
  std::vector<NodeId> order;
  order.reserve(n);
  while (!ready.empty()) {
    const auto u = ready.front();
    ready.pop_front();
    order.push_back(u);
    for (const auto v : envelope.row(u)) {
      if (--indegree[v.index()] == 0) ready.push_back(v);
    }
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

bool is_acyclic(const CrispEnvelope& envelope) { return topological_order(envelope).has_value(); }

std::size_t CondensedGraph::supernode_count() const {
  return static_cast<std::size_t>(std::count(supernode.begin(), supernode.end(), true));
}

std::size_t CondensedGraph::nodes_in_supernodes() const {
  std::size_t total = 0;
  for (std::size_t c = 0; c < components.size(); ++c) {
    if (supernode[c]) total += components[c].size();
  }
  return total;
}

CondensedGraph condense(const CrispEnvelope& envelope) {
  const auto n = envelope.node_count();
  auto sccs = detail::strongly_connected_components(
      n, [&](std::uint32_t v, std::vector<std::uint32_t>& out) {
        for (const auto w : envelope.row(NodeId{v})) out.push_back(w.value);
      });
  std::reverse(sccs.begin(), sccs.end());

  CondensedGraph cg;
  cg.component_of.assign(n, 0);
  cg.components.reserve(sccs.size());
  for (std::size_t c = 0; c < sccs.size(); ++c) {
    std::vector<NodeId> comp;
    comp.reserve(sccs[c].size());
    for (const auto v : sccs[c]) {
      comp.push_back(NodeId{v});
      cg.component_of[v] = c;
    }
    const bool self_loop = comp.size() == 1 && envelope.has_edge(comp[0], comp[0]);
    cg.supernode.push_back(comp.size() >= 2 || self_loop);
    cg.components.push_back(std::move(comp));
  }
  for (const auto& [f, g] : envelope.edges()) {
    const auto a = cg.component_of[f.index()];
    const auto b = cg.component_of[g.index()];
    if (a != b) cg.dag_edges.emplace_back(a, b);
  }
  std::sort(cg.dag_edges.begin(), cg.dag_edges.end());
  cg.dag_edges.erase(std::unique(cg.dag_edges.begin(), cg.dag_edges.end()), cg.dag_edges.end());
  return cg;
}

std::vector<EtaPoint> eta_sweep(const AggregatedLog& log, const std::vector<double>& thresholds,
                                EtaDenominator denominator) {
  std::vector<EtaPoint> out;
  out.reserve(thresholds.size());
  for (const double p0 : thresholds) {
    const auto envelope = binarize_threshold(log, p0);
    const auto cg = condense(envelope);
    EtaPoint pt;
    pt.p0 = p0;
    pt.supernode_count = cg.supernode_count();
    pt.nodes_in_supernodes = cg.nodes_in_supernodes();
    if (denominator == EtaDenominator::all) {
      pt.total_nodes = envelope.node_count();
    } else {
      std::vector<bool> active(envelope.node_count(), false);
      for (const auto& [f, g] : envelope.edges()) active[f.index()] = active[g.index()] = true;
      pt.total_nodes = static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
    }
    pt.eta = pt.total_nodes > 0
                 ? static_cast<double>(pt.nodes_in_supernodes) / static_cast<double>(pt.total_nodes)
                 : 0.0;
    out.push_back(pt);
  }
  return out;
}

SpectralBounds spectral_radius_bounds(const FuzzyKernel& kernel) {
  SpectralBounds b;
  b.upper = kernel.max_row_sum();
  const auto cg = condense(support_envelope(kernel));
  b.is_nilpotent = cg.supernode_count() == 0;
  if (b.is_nilpotent) return b;

  for (std::size_t c = 0; c < cg.components.size(); ++c) {
    if (!cg.supernode[c]) continue;
    const auto& comp = cg.components[c];
    detail::LocalMatrix m;
    m.n = comp.size();
    for (const auto v : comp) {
      for (const auto& e : kernel.row(v)) {
        if (cg.component_of[e.to.index()] != c) continue;
        const auto local = std::lower_bound(comp.begin(), comp.end(), e.to) - comp.begin();
        m.cols.push_back(static_cast<std::uint32_t>(local));
        m.vals.push_back(e.mu);
      }
      m.offsets.push_back(m.cols.size());
    }
    const auto pb = detail::perron_bounds(m, kPowerIterations);
    b.lower = std::max(b.lower, pb.lower);
    b.scc_upper = std::max(b.scc_upper, pb.upper);
  }
  return b;
}

std::vector<NodeId> epoch_expansion(const CrispEnvelope& envelope, NodeId start,
                                    std::size_t epochs) {
  check_node(envelope, start);
  std::vector<bool> seen(envelope.node_count(), false);
  std::vector<NodeId> frontier{start};
  seen[start.index()] = true;
  for (std::size_t e = 0; e < epochs && !frontier.empty(); ++e) {
    std::vector<NodeId> next;
    for (const auto u : frontier) {
      for (const auto v : envelope.row(u)) {
        if (!seen[v.index()]) {
          seen[v.index()] = true;
          next.push_back(v);
        }
      }
    }
    frontier = std::move(next);
  }
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) out.push_back(node(i));
  }
  return out;
}

}  // namespace searchspace
