#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "searchspace/geometry.hpp"
#include "searchspace/relation.hpp"

namespace searchspace {

enum class SeriesMethod { dag_exact, truncated_series, resolvent };
enum class SeriesStatus { converged, diverged, iteration_limit };

std::string_view method_name(SeriesMethod m);
std::string_view status_name(SeriesStatus s);

/// One evaluation of the coverage generating function P_{f,g}(p).
struct SeriesEval {
  double value = 0.0;  // +inf when diverged
  SeriesMethod method = SeriesMethod::dag_exact;
  SeriesStatus status = SeriesStatus::converged;
  std::optional<std::size_t> truncation_order;
  std::optional<double> tail_bound;
  double p = 0.0;
  std::size_t iterations = 0;

  bool diverged() const { return status == SeriesStatus::diverged; }
};

/// P_{f,g}(p) prepared for repeated evaluation at different p.
///
/// Only nodes lying on some f -> g walk matter, so the solver restricts the
/// kernel to them and condenses that subgraph. Blocks are solved sinks first:
///
///   P_{u,g} = [u = g] + p * sum_v mu_u(v) P_{v,g}
///
/// Acyclic blocks are a direct substitution (method dag_exact when every block
/// is trivial). A cyclic block C is solved by the fixed-point iteration
/// y <- b + p M_C y, which contracts with factor p * bound(C) in a weighted
/// max-norm; bound(C) is a certified spectral upper bound for the block. When
/// p * bound(C) >= 1 the value is reported as diverged.
class CoverageSolver {
 public:
  CoverageSolver(const FuzzyKernel& kernel, NodeId f, NodeId g);
  ~CoverageSolver();
  CoverageSolver(CoverageSolver&&) noexcept;
  CoverageSolver& operator=(CoverageSolver&&) noexcept;

  /// Throws ContractError unless 0 <= p <= 1.
  SeriesEval evaluate(double p) const;

  bool reachable() const;
  /// True when no walk from f to g passes through a cycle.
  bool acyclic() const;
  NodeId source() const;
  NodeId target() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Dispatching evaluation (see CoverageSolver).
SeriesEval eval_coverage(const FuzzyKernel& kernel, NodeId f, NodeId g, double p);
SeriesEval eval_coverage(const CrispEnvelope& envelope, NodeId f, NodeId g, double p);

/// Reverse-topological dynamic programming over the whole kernel. Throws
/// ContractError when the support has a cycle.
SeriesEval eval_dag_exact(const FuzzyKernel& kernel, NodeId f, NodeId g, double p);

/// Global Neumann iteration x <- e_f + p M^T x, read at g. Reports diverged
/// when p * ||M||_inf >= 1.
SeriesEval eval_resolvent(const FuzzyKernel& kernel, NodeId f, NodeId g, double p);

/// sum_{n<=K} (pM)^n_{f,g} with K the smallest order whose certified tail
/// (p||M||_inf)^{K+1} / (1 - p||M||_inf) is <= tail_tolerance. Throws
/// ContractError when p * ||M||_inf >= 1.
SeriesEval eval_truncated_series(const FuzzyKernel& kernel, NodeId f, NodeId g, double p,
                                 double tail_tolerance = 1e-10);

inline constexpr double kCriticalTolerance = 1e-9;
inline constexpr int kMaxBisectionSteps = 60;

struct CriticalParameter {
  double p_c = 1.0;
  double r_c = 0.0;
  SeriesMethod method = SeriesMethod::dag_exact;
  int bisection_steps = 0;
};

/// p_c = inf{p in [0,1] : P_{f,g}(p) >= 1} by bisection (diverged counts as
/// >= 1); p_c = 1 when the set is empty, and r_c = 1 - p_c.
CriticalParameter critical_parameter(const FuzzyKernel& kernel, NodeId f, NodeId g);
CriticalParameter critical_parameter(const CrispEnvelope& envelope, NodeId f, NodeId g);
CriticalParameter critical_parameter(const CoverageSolver& solver);

struct LowOrderLimit {
  double ratio = 0.0;   // P(p_small) / p_small^{d0}
  BigCount expected;    // N_{d0}
  std::size_t d0 = 0;
  double p_small = 0.0;
};

/// Requires (f,g) reachable and 0 < p_small <= 1e-3; throws ContractError
/// otherwise.
LowOrderLimit verify_low_order_limit(const CrispEnvelope& envelope, NodeId f, NodeId g,
                                     double p_small);

inline constexpr double kTransitivitySlack = 1e-12;

struct TransitivityPoint {
  double p = 0.0;
  double lhs = 0.0;  // P_{f,g}(p)
  double rhs = 0.0;  // P_{f,h}(p) * P_{h,g}(p)
  bool holds = true;
};

/// Evaluates P_{f,g} >= P_{f,h} P_{h,g} on a grid of p. Violations (which
/// occur when walks may revisit h, e.g. a self-loop) are reported, not thrown.
std::vector<TransitivityPoint> transitivity_check(const CrispEnvelope& envelope, NodeId f, NodeId h,
                                                  NodeId g, const std::vector<double>& p_grid);

struct WaypointEntry {
  NodeId h;
  double bound = 0.0;  // min(R_c(f,h), R_c(h,g))
  double r_c_fh = 0.0;
  double r_c_hg = 0.0;
  bool is_intermediate = false;
};

struct WaypointRanking {
  NodeId f;
  NodeId g;
  double r_c_fg = 0.0;
  std::vector<WaypointEntry> entries;  // bound descending, then node id
};

/// Ranks candidate waypoints h by the transitivity lower bound on R_c(f,g).
/// The default candidates are the nodes on some f -> g walk other than f and g.
WaypointRanking rank_waypoints(const CrispEnvelope& envelope, NodeId f, NodeId g,
                               const std::optional<std::vector<NodeId>>& candidates = std::nullopt);

struct CoverageReport {
  NodeId f;
  NodeId g;
  std::optional<std::size_t> d0;
  BigCount n_shortest;
  double p_c = 1.0;
  double r_c = 0.0;
  std::string method;
};

/// Geometry comes from the support of `kernel`. p_c uses the crisp support by
/// default, or the fuzzy kernel itself when `fuzzy` is set.
std::vector<CoverageReport> coverage_report(const FuzzyKernel& kernel,
                                            const std::vector<NodePair>& pairs, bool fuzzy = false);
std::vector<CoverageReport> coverage_report(const CrispEnvelope& envelope,
                                            const std::vector<NodePair>& pairs);

/// h[n] = sum over walks of length n starting at f of their mu-products.
std::vector<double> length_weight_histogram(const FuzzyKernel& kernel, NodeId f,
                                            std::size_t max_length);

}  // namespace searchspace
