#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "searchspace/ingest.hpp"
#include "searchspace/relation.hpp"

namespace searchspace {

using BigCount = boost::multiprecision::cpp_int;

/// BFS distances from `from`; nullopt marks unreachable nodes.
std::vector<std::optional<std::size_t>> distances_from(const CrispEnvelope& envelope, NodeId from);

/// d0(f,g): length of a shortest directed path, d0(f,f) = 0.
std::optional<std::size_t> shortest_distance(const CrispEnvelope& envelope, NodeId f, NodeId g);

/// N_{d0}(f,g) by layered BFS counting; 0 when g is unreachable.
BigCount count_shortest_paths(const CrispEnvelope& envelope, NodeId f, NodeId g);

/// Walk counts N_n(f,g) for n = 0..max_length (capped at `cap`).
struct PathCountTable {
  std::vector<BigCount> counts;
  std::size_t max_length = 0;  // last length actually computed
  bool truncated = false;      // requested length exceeded the cap

  const BigCount& at(std::size_t n) const { return counts.at(n); }
};

inline constexpr std::size_t kDefaultPathLengthCap = 64;

PathCountTable path_counts(const CrispEnvelope& envelope, NodeId f, NodeId g, std::size_t max_length,
                           std::size_t cap = kDefaultPathLengthCap);

/// counts[n][g] = N_n(f,g) for every g, n = 0..max_length (no cap).
std::vector<std::vector<BigCount>> walk_counts_from(const CrispEnvelope& envelope, NodeId f,
                                                    std::size_t max_length);

/// Nodes reachable from `start` (including it), as a membership mask.
std::vector<bool> forward_reachable(const CrispEnvelope& envelope, NodeId start);
/// Nodes from which `target` is reachable (including it).
std::vector<bool> backward_reachable(const CrispEnvelope& envelope, NodeId target);

/// Topological order of the nodes, or nullopt when the graph has a cycle
/// (self-loops included).
std::optional<std::vector<NodeId>> topological_order(const CrispEnvelope& envelope);
bool is_acyclic(const CrispEnvelope& envelope);

/// Strongly connected components contracted into a DAG.
struct CondensedGraph {
  std::vector<std::vector<NodeId>> components;  // topological order; nodes sorted within
  std::vector<bool> supernode;                   // size >= 2, or a single node with a self-loop
  std::vector<std::size_t> component_of;         // indexed by NodeId
  std::vector<std::pair<std::size_t, std::size_t>> dag_edges;  // sorted, deduplicated

  std::size_t supernode_count() const;
  std::size_t nodes_in_supernodes() const;
};

CondensedGraph condense(const CrispEnvelope& envelope);

enum class EtaDenominator {
  active,  // nodes incident to at least one surviving edge
  all,     // every node seen in the log
};

struct EtaPoint {
  double p0 = 0.0;
  double eta = 0.0;
  std::size_t supernode_count = 0;
  std::size_t nodes_in_supernodes = 0;
  std::size_t total_nodes = 0;
};

/// For each threshold: binarize, condense, report the supernode share.
/// Output order follows the input order.
std::vector<EtaPoint> eta_sweep(const AggregatedLog& log, const std::vector<double>& thresholds,
                                EtaDenominator denominator = EtaDenominator::active);

struct SpectralBounds {
  double upper = 0.0;      // max row sum
  double lower = 0.0;      // certified lower bound from power iteration
  double scc_upper = 0.0;  // max over SCCs of a certified per-component upper bound
  bool is_nilpotent = false;
};

inline constexpr int kPowerIterations = 200;

SpectralBounds spectral_radius_bounds(const FuzzyKernel& kernel);

/// Nodes reached from `start` within `epochs` expansion rounds, sorted.
std::vector<NodeId> epoch_expansion(const CrispEnvelope& envelope, NodeId start, std::size_t epochs);

}  // namespace searchspace
