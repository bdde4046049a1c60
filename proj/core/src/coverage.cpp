#include "searchspace/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "detail.hpp"
#include "searchspace/error.hpp"

namespace searchspace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelativeTolerance = 1e-13;
constexpr std::size_t kMaxSweeps = 200'000;
constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ContractError(fmt::format("continuation parameter p = {} outside [0,1]", p));
  }
}

void check_node(const FuzzyKernel& kernel, NodeId id) {
  if (id.index() >= kernel.node_count()) {
    throw ContractError(fmt::format("node id {} outside the kernel", id.value));
  }
}

SeriesEval diverged_at(double p, SeriesMethod method) {
  SeriesEval e;
  e.value = kInf;
  e.method = method;
  e.status = SeriesStatus::diverged;
  e.p = p;
  return e;
}

}  // namespace

std::string_view method_name(SeriesMethod m) {
  switch (m) {
    case SeriesMethod::dag_exact: return "dag_exact";
    case SeriesMethod::truncated_series: return "truncated_series";
    case SeriesMethod::resolvent: return "resolvent";
  }
  return "?";
}

std::string_view status_name(SeriesStatus s) {
  switch (s) {
    case SeriesStatus::converged: return "converged";
    case SeriesStatus::diverged: return "diverged";
    case SeriesStatus::iteration_limit: return "iteration_limit";
  }
  return "?";
}

// ---------------------------------------------------------------------------

struct CoverageSolver::Impl {
  NodeId f;
  NodeId g;
  bool reachable = false;
  bool acyclic = true;

  std::vector<NodeId> nodes;  // relevant nodes, local index -> global id
  std::uint32_t f_local = kAbsent;
  std::uint32_t g_local = kAbsent;
  detail::LocalMatrix m;      // kernel restricted to the relevant nodes

  struct Block {
    std::vector<std::uint32_t> members;     // local indices, sorted
    std::vector<std::uint32_t> position;    // local index -> position in members (kAbsent outside)
    double self_loop = 0.0;                 // singleton with self-loop
    bool cyclic = false;
    double bound = 0.0;                     // certified upper bound on rho(M_C)
    std::vector<double> weights;            // (M_C w) <= bound * w
  };
  std::vector<Block> blocks;                // sinks first
  std::vector<std::uint32_t> block_of;

  Impl(const FuzzyKernel& kernel, NodeId f_, NodeId g_) : f(f_), g(g_) {
    check_node(kernel, f);
    check_node(kernel, g);
    const auto support = support_envelope(kernel);
    const auto fwd = forward_reachable(support, f);
    const auto bwd = backward_reachable(support, g);
    reachable = fwd[g.index()];
    if (!reachable) return;

    std::vector<std::uint32_t> local(kernel.node_count(), kAbsent);
    for (std::size_t i = 0; i < kernel.node_count(); ++i) {
      if (fwd[i] && bwd[i]) {
        local[i] = static_cast<std::uint32_t>(nodes.size());
        nodes.push_back(NodeId{static_cast<std::uint32_t>(i)});
      }
    }
    f_local = local[f.index()];
    g_local = local[g.index()];

    m.n = nodes.size();
    for (const auto u : nodes) {
      for (const auto& e : kernel.row(u)) {
        if (local[e.to.index()] == kAbsent) continue;
        m.cols.push_back(local[e.to.index()]);
        m.vals.push_back(e.mu);
      }
      m.offsets.push_back(m.cols.size());
    }

    auto sccs = detail::strongly_connected_components(
        m.n, [&](std::uint32_t v, std::vector<std::uint32_t>& out) {
          for (auto k = m.row_begin(v); k < m.row_end(v); ++k) out.push_back(m.cols[k]);
        });
    block_of.assign(m.n, 0);
    blocks.reserve(sccs.size());
    for (auto& members : sccs) {
      Block b;
      b.members = std::move(members);
      const auto id = static_cast<std::uint32_t>(blocks.size());
      for (const auto v : b.members) block_of[v] = id;
      if (b.members.size() == 1) {
        const auto v = b.members[0];
        for (auto k = m.row_begin(v); k < m.row_end(v); ++k) {
          if (m.cols[k] == v) b.self_loop = m.vals[k];
        }
        b.cyclic = b.self_loop > 0.0;
        b.bound = b.self_loop;
      } else {
        b.cyclic = true;
      }
      blocks.push_back(std::move(b));
    }
    for (auto& b : blocks) {
      if (b.members.size() < 2) continue;
      acyclic = false;
      b.position.assign(m.n, kAbsent);
      for (std::uint32_t i = 0; i < b.members.size(); ++i) b.position[b.members[i]] = i;
      detail::LocalMatrix sub;
      sub.n = b.members.size();
      for (const auto v : b.members) {
        for (auto k = m.row_begin(v); k < m.row_end(v); ++k) {
          const auto w = m.cols[k];
          if (b.position[w] == kAbsent) continue;
          sub.cols.push_back(b.position[w]);
          sub.vals.push_back(m.vals[k]);
        }
        sub.offsets.push_back(sub.cols.size());
      }
      auto pb = detail::perron_bounds(sub, kPowerIterations);
      b.bound = pb.upper;
      b.weights = std::move(pb.weights);
    }
    for (const auto& b : blocks) {
      if (b.self_loop > 0.0) acyclic = false;
    }
  }

  SeriesEval evaluate(double p) const {
    check_p(p);
    const auto method = acyclic ? SeriesMethod::dag_exact : SeriesMethod::resolvent;
    SeriesEval out;
    out.p = p;
    out.method = method;
    if (!reachable) {
      out.value = 0.0;
      return out;
    }

    std::vector<double> y(m.n, 0.0);
    std::size_t sweeps = 0;
    bool hit_limit = false;
    // Contribution of rows leaving block `self` (already solved) plus [u = g].
    auto base = [&](std::uint32_t u, std::uint32_t self) {
      double s = 0.0;
      for (auto k = m.row_begin(u); k < m.row_end(u); ++k) {
        const auto v = m.cols[k];
        if (block_of[v] != self) s += m.vals[k] * y[v];
      }
      return (u == g_local ? 1.0 : 0.0) + p * s;
    };

    for (std::uint32_t id = 0; id < blocks.size(); ++id) {
      const auto& b = blocks[id];
      if (b.members.size() == 1) {
        const auto u = b.members[0];
        const double rhs = base(u, id);
        if (b.self_loop == 0.0) {
          y[u] = rhs;
          continue;
        }
        const double q = p * b.self_loop;
        if (q >= 1.0) return diverged_at(p, method);
        y[u] = rhs / (1.0 - q);
        continue;
      }

      const double q = p * b.bound;
      if (q >= 1.0) return diverged_at(p, method);
      const auto size = b.members.size();
      std::vector<double> rhs(size), cur(size), next(size);
      for (std::size_t i = 0; i < size; ++i) rhs[i] = base(b.members[i], id);
      cur = rhs;
      const double factor = q / (1.0 - q);
      for (std::size_t sweep = 0;; ++sweep) {
        double step = 0.0;  // weighted max-norm of next - cur
        for (std::size_t i = 0; i < size; ++i) {
          const auto u = b.members[i];
          double s = 0.0;
          for (auto k = m.row_begin(u); k < m.row_end(u); ++k) {
            const auto pos = b.position[m.cols[k]];
            if (pos != kAbsent) s += m.vals[k] * cur[pos];
          }
          next[i] = rhs[i] + p * s;
          step = std::max(step, (next[i] - cur[i]) / b.weights[i]);
        }
        std::swap(cur, next);
        ++sweeps;
        // ||y* - y||_w <= factor * step, so component i is within
        // factor * step * w_i of its limit.
        bool done = true;
        for (std::size_t i = 0; i < size && done; ++i) {
          const double err = factor * step * b.weights[i];
          done = err <= kRelativeTolerance * cur[i] || err <= 1e-300;
        }
        if (done) break;
        if (sweep + 1 >= kMaxSweeps) {
          hit_limit = true;
          break;
        }
      }
      for (std::size_t i = 0; i < size; ++i) y[b.members[i]] = cur[i];
    }

    out.value = y[f_local];
    out.iterations = sweeps;
    if (hit_limit) out.status = SeriesStatus::iteration_limit;
    return out;
  }
};

CoverageSolver::CoverageSolver(const FuzzyKernel& kernel, NodeId f, NodeId g)
    : impl_(std::make_unique<Impl>(kernel, f, g)) {}
CoverageSolver::~CoverageSolver() = default;
CoverageSolver::CoverageSolver(CoverageSolver&&) noexcept = default;
CoverageSolver& CoverageSolver::operator=(CoverageSolver&&) noexcept = default;

SeriesEval CoverageSolver::evaluate(double p) const { return impl_->evaluate(p); }
bool CoverageSolver::reachable() const { return impl_->reachable; }
bool CoverageSolver::acyclic() const { return impl_->acyclic; }
NodeId CoverageSolver::source() const { return impl_->f; }
NodeId CoverageSolver::target() const { return impl_->g; }

SeriesEval eval_coverage(const FuzzyKernel& kernel, NodeId f, NodeId g, double p) {
  check_p(p);
  return CoverageSolver(kernel, f, g).evaluate(p);
}

SeriesEval eval_coverage(const CrispEnvelope& envelope, NodeId f, NodeId g, double p) {
  return eval_coverage(envelope.as_kernel(), f, g, p);
}

// ---------------------------------------------------------------------------

SeriesEval eval_dag_exact(const FuzzyKernel& kernel, NodeId f, NodeId g, double p) {
  check_p(p);
  check_node(kernel, f);
  check_node(kernel, g);
  const auto order = topological_order(support_envelope(kernel));
  if (!order) throw ContractError("dag_exact evaluation requires an acyclic support");
  std::vector<double> y(kernel.node_count(), 0.0);
  for (auto it = order->rbegin(); it != order->rend(); ++it) {
    double s = 0.0;
    for (const auto& e : kernel.row(*it)) s += e.mu * y[e.to.index()];
    y[it->index()] = (*it == g ? 1.0 : 0.0) + p * s;
  }
  SeriesEval out;
  out.value = y[f.index()];
  out.method = SeriesMethod::dag_exact;
  out.p = p;
  return out;
}

SeriesEval eval_resolvent(const FuzzyKernel& kernel, NodeId f, NodeId g, double p) {
  check_p(p);
  check_node(kernel, f);
  check_node(kernel, g);
  const double q = p * kernel.max_row_sum();
  if (q >= 1.0) return diverged_at(p, SeriesMethod::resolvent);

  const auto n = kernel.node_count();
  std::vector<double> x(n, 0.0), next(n);
  x[f.index()] = 1.0;
  const double factor = q / (1.0 - q);
  SeriesEval out;
  out.method = SeriesMethod::resolvent;
  out.p = p;
  for (std::size_t it = 1;; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    next[f.index()] = 1.0;
    for (std::size_t u = 0; u < n; ++u) {
      if (x[u] == 0.0) continue;
      for (const auto& e : kernel.row(NodeId{static_cast<std::uint32_t>(u)})) {
        next[e.to.index()] += p * e.mu * x[u];
      }
    }
    double residual = 0.0;  // l1 norm; M^T contracts in l1 with factor q
    for (std::size_t i = 0; i < n; ++i) residual += std::abs(next[i] - x[i]);
    std::swap(x, next);
    out.iterations = it;
    const double err = factor * residual;
    if (residual == 0.0 || err <= kRelativeTolerance * x[g.index()] || err <= 1e-15) break;
    if (it >= kMaxSweeps) {
      out.status = SeriesStatus::iteration_limit;
      break;
    }
  }
  out.value = x[g.index()];
  return out;
}

SeriesEval eval_truncated_series(const FuzzyKernel& kernel, NodeId f, NodeId g, double p,
                                 double tail_tolerance) {
  check_p(p);
  check_node(kernel, f);
  check_node(kernel, g);
  if (!(tail_tolerance > 0.0)) throw ContractError("tail tolerance must be positive");
  const double q = p * kernel.max_row_sum();
  if (q >= 1.0) {
    throw ContractError(fmt::format(
        "truncated series needs p * ||M||_inf < 1, got {}", q));
  }
  // Smallest K with q^{K+1} / (1 - q) <= tol.
  std::size_t order = 0;
  double tail = q / (1.0 - q);
  while (tail > tail_tolerance) {
    tail *= q;
    ++order;
  }

  const auto n = kernel.node_count();
  std::vector<double> v(n, 0.0), next(n);
  v[f.index()] = 1.0;
  double sum = v[g.index()];
  for (std::size_t len = 1; len <= order; ++len) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t u = 0; u < n; ++u) {
      if (v[u] == 0.0) continue;
      for (const auto& e : kernel.row(NodeId{static_cast<std::uint32_t>(u)})) {
        next[e.to.index()] += p * e.mu * v[u];
      }
    }
    std::swap(v, next);
    sum += v[g.index()];
  }
  SeriesEval out;
  out.value = sum;
  out.method = SeriesMethod::truncated_series;
  out.truncation_order = order;
  out.tail_bound = tail;
  out.p = p;
  out.iterations = order;
  return out;
}

// ---------------------------------------------------------------------------

CriticalParameter critical_parameter(const CoverageSolver& solver) {
  CriticalParameter out;
  out.method = solver.acyclic() ? SeriesMethod::dag_exact : SeriesMethod::resolvent;
  if (solver.source() == solver.target()) {
    out.p_c = 0.0;
    out.r_c = 1.0;
    return out;
  }
  if (!solver.reachable()) return out;

  auto reaches_unit = [&](double p) {
    const auto e = solver.evaluate(p);
    return e.diverged() || e.value >= 1.0;
  };
  if (!reaches_unit(1.0)) return out;  // the set {p : P >= 1} is empty

  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > kCriticalTolerance && out.bisection_steps < kMaxBisectionSteps) {
    const double mid = 0.5 * (lo + hi);
    (reaches_unit(mid) ? hi : lo) = mid;
    ++out.bisection_steps;
  }
  out.p_c = hi;
  out.r_c = 1.0 - hi;
  return out;
}

CriticalParameter critical_parameter(const FuzzyKernel& kernel, NodeId f, NodeId g) {
  return critical_parameter(CoverageSolver(kernel, f, g));
}

CriticalParameter critical_parameter(const CrispEnvelope& envelope, NodeId f, NodeId g) {
  return critical_parameter(envelope.as_kernel(), f, g);
}

LowOrderLimit verify_low_order_limit(const CrispEnvelope& envelope, NodeId f, NodeId g,
                                     double p_small) {
  if (!(p_small > 0.0 && p_small <= 1e-3)) {
    throw ContractError(fmt::format("p_small = {} must lie in (0, 1e-3]", p_small));
  }
  const auto d0 = shortest_distance(envelope, f, g);
  if (!d0) {
    throw ContractError(fmt::format("node {} is unreachable from node {}", g.value, f.value));
  }
  LowOrderLimit out;
  out.d0 = *d0;
  out.p_small = p_small;
  out.expected = count_shortest_paths(envelope, f, g);
  const auto e = eval_coverage(envelope, f, g, p_small);
  out.ratio = e.diverged() ? kInf : e.value / std::pow(p_small, static_cast<double>(*d0));
  return out;
}

std::vector<TransitivityPoint> transitivity_check(const CrispEnvelope& envelope, NodeId f, NodeId h,
                                                  NodeId g, const std::vector<double>& p_grid) {
  const auto kernel = envelope.as_kernel();
  const CoverageSolver fg(kernel, f, g), fh(kernel, f, h), hg(kernel, h, g);
  std::vector<TransitivityPoint> out;
  out.reserve(p_grid.size());
  for (const double p : p_grid) {
    TransitivityPoint pt;
    pt.p = p;
    pt.lhs = fg.evaluate(p).value;
    const double a = fh.evaluate(p).value;
    const double b = hg.evaluate(p).value;
    pt.rhs = (a == 0.0 || b == 0.0) ? 0.0 : a * b;
    pt.holds = pt.lhs >= pt.rhs - kTransitivitySlack;
    out.push_back(pt);
  }
  return out;
}

WaypointRanking rank_waypoints(const CrispEnvelope& envelope, NodeId f, NodeId g,
                               const std::optional<std::vector<NodeId>>& candidates) {
  const auto kernel = envelope.as_kernel();
  const auto fwd = forward_reachable(envelope, f);
  const auto bwd = backward_reachable(envelope, g);

  std::vector<NodeId> pool;
  if (candidates) {
    pool = *candidates;
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  } else {
    for (std::size_t i = 0; i < envelope.node_count(); ++i) {
      const NodeId h{static_cast<std::uint32_t>(i)};
      if (fwd[i] && bwd[i] && h != f && h != g) pool.push_back(h);
    }
  }

  WaypointRanking ranking;
  ranking.f = f;
  ranking.g = g;
  ranking.r_c_fg = critical_parameter(kernel, f, g).r_c;
  ranking.entries.reserve(pool.size());
  for (const auto h : pool) {
    if (h.index() >= envelope.node_count()) {
      throw ContractError(fmt::format("candidate node {} outside the graph", h.value));
    }
    WaypointEntry e;
    e.h = h;
    e.r_c_fh = critical_parameter(kernel, f, h).r_c;
    e.r_c_hg = critical_parameter(kernel, h, g).r_c;
    e.bound = std::min(e.r_c_fh, e.r_c_hg);
    e.is_intermediate = fwd[h.index()] && bwd[h.index()];
    ranking.entries.push_back(e);
  }
  std::stable_sort(ranking.entries.begin(), ranking.entries.end(),
                   [](const WaypointEntry& a, const WaypointEntry& b) {
                     if (a.bound != b.bound) return a.bound > b.bound;
                     return a.h < b.h;
                   });
  return ranking;
}

namespace {

std::vector<CoverageReport> build_reports(const CrispEnvelope& envelope, const FuzzyKernel& weights,
                                          const std::vector<NodePair>& pairs, std::string_view kind) {
  std::vector<CoverageReport> out;
  out.reserve(pairs.size());
  for (const auto& [f, g] : pairs) {
    CoverageReport r;
    r.f = f;
    r.g = g;
    r.d0 = shortest_distance(envelope, f, g);
    if (f == g) {
      r.n_shortest = 1;
      r.p_c = 0.0;
      r.r_c = 1.0;
      r.method = "identity";
    } else if (!r.d0) {
      r.n_shortest = 0;
      r.p_c = 1.0;
      r.r_c = 0.0;
      r.method = "unreachable";
    } else {
      r.n_shortest = count_shortest_paths(envelope, f, g);
      const auto cp = critical_parameter(weights, f, g);
      r.p_c = cp.p_c;
      r.r_c = cp.r_c;
      r.method = fmt::format("{}:{}+bisection", kind, method_name(cp.method));
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::vector<CoverageReport> coverage_report(const FuzzyKernel& kernel,
                                            const std::vector<NodePair>& pairs, bool fuzzy) {
  const auto envelope = support_envelope(kernel);
  if (fuzzy) return build_reports(envelope, kernel, pairs, "fuzzy");
  return build_reports(envelope, envelope.as_kernel(), pairs, "crisp");
}

std::vector<CoverageReport> coverage_report(const CrispEnvelope& envelope,
                                            const std::vector<NodePair>& pairs) {
  return build_reports(envelope, envelope.as_kernel(), pairs, "crisp");
}

std::vector<double> length_weight_histogram(const FuzzyKernel& kernel, NodeId f,
                                            std::size_t max_length) {
  check_node(kernel, f);
  const auto n = kernel.node_count();
  std::vector<double> v(n, 0.0), next(n), hist;
  v[f.index()] = 1.0;
  hist.push_back(1.0);
  for (std::size_t len = 1; len <= max_length; ++len) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t u = 0; u < n; ++u) {
      if (v[u] == 0.0) continue;
      for (const auto& e : kernel.row(NodeId{static_cast<std::uint32_t>(u)})) {
        next[e.to.index()] += e.mu * v[u];
      }
    }
    std::swap(v, next);
    double total = 0.0;
    for (const double w : v) total += w;
    hist.push_back(total);
  }
  return hist;
}

}  // namespace searchspace
