#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace searchspace {

/// Dense handle of an interned state. Ids are contiguous from 0.
struct NodeId {
  std::uint32_t value = 0;

  constexpr std::size_t index() const { return value; }
  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

using NodePair = std::pair<NodeId, NodeId>;

/// Bijection between state labels and NodeIds. Labels are compared after
/// trimming leading and trailing whitespace, nothing else.
class NodeTable {
 public:
  NodeId intern(std::string_view label);
  std::optional<NodeId> find(std::string_view label) const;
  NodeId at(std::string_view label) const;  // throws InputError if unknown

  const std::string& label(NodeId id) const { return labels_.at(id.index()); }
  std::span<const std::string> labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
};

/// Whitespace-trimmed view of `label`.
std::string_view trim_label(std::string_view label);

/// Weights below this are treated as absent at insertion.
inline constexpr double kMuEpsilon = 1e-12;

struct WeightedEdge {
  NodeId to;
  double mu = 0.0;
};

struct EdgeTriplet {
  NodeId from;
  NodeId to;
  double mu = 0.0;
};

class CrispEnvelope;

/// The agent T(f,g) = mu_f(g) as a sparse row-grouped matrix. Immutable once
/// built; every stored weight lies in (0,1] and each ordered pair appears at
/// most once.
class FuzzyKernel {
 public:
  FuzzyKernel() = default;
  explicit FuzzyKernel(std::size_t node_count);

  std::size_t node_count() const { return offsets_.size() - 1; }
  std::size_t edge_count() const { return edges_.size(); }

  /// Outgoing edges of `from`, sorted by target id.
  std::span<const WeightedEdge> row(NodeId from) const;

  /// mu_f(g), or 0 when the pair is not an edge.
  double mu(NodeId from, NodeId to) const;
  bool has_edge(NodeId from, NodeId to) const { return mu(from, to) > 0.0; }

  std::vector<EdgeTriplet> edges() const;

  /// Max row sum, the infinity-norm of M.
  double max_row_sum() const;

 private:
  friend class KernelBuilder;
  std::vector<std::size_t> offsets_{0};
  std::vector<WeightedEdge> edges_;
};

/// Single-writer construction of a FuzzyKernel.
class KernelBuilder {
 public:
  explicit KernelBuilder(std::size_t node_count);

  /// Inserts mu(from,to). Values below kMuEpsilon are dropped. Re-inserting a
  /// pair with the same weight is a no-op; a differing weight throws
  /// StructuralError. Weights outside [0,1] throw InputError.
  KernelBuilder& add(NodeId from, NodeId to, double mu);

  std::size_t node_count() const { return node_count_; }
  FuzzyKernel build() &&;

 private:
  std::size_t node_count_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> entries_;
};

/// Crisp safety envelope T0: a kernel whose weights are all exactly 1.
class CrispEnvelope {
 public:
  CrispEnvelope() = default;
  explicit CrispEnvelope(std::size_t node_count);
  /// Builds from an edge list; duplicates are merged.
  CrispEnvelope(std::size_t node_count, std::span<const NodePair> edges);

  std::size_t node_count() const { return offsets_.size() - 1; }
  std::size_t edge_count() const { return targets_.size(); }

  /// Successors of `from`, sorted by id.
  std::span<const NodeId> row(NodeId from) const;
  bool has_edge(NodeId from, NodeId to) const;
  std::vector<NodePair> edges() const;

  /// Same graph with every weight 1.
  FuzzyKernel as_kernel() const;
  /// Edges reversed; useful for backward reachability.
  CrispEnvelope transposed() const;
  /// Copy with the listed edges removed (absent ones are ignored).
  CrispEnvelope without_edges(std::span<const NodePair> removed) const;

  friend bool operator==(const CrispEnvelope&, const CrispEnvelope&) = default;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> targets_;
};

/// An ordered node sequence; consecutive pairs must be kernel edges.
struct SearchTrajectory {
  std::vector<NodeId> nodes;

  std::size_t length() const { return nodes.empty() ? 0 : nodes.size() - 1; }
  bool valid_in(const FuzzyKernel& kernel) const;
};

/// Binarized support: (f,g) is an edge iff mu(f,g) > 0.
CrispEnvelope support_envelope(const FuzzyKernel& kernel);

struct DominationResult {
  bool dominated = true;
  std::optional<NodePair> violation;  // first kernel edge missing from the envelope
};

/// Checks 0 <= T(f,g) <= T0(f,g) for every pair. Throws StructuralError on
/// mismatched node counts.
DominationResult check_safety_domination(const FuzzyKernel& kernel,
                                         const CrispEnvelope& envelope);

/// min(1, value). +inf (a diverged series) clips to 1; negative or NaN input
/// throws ContractError.
double clip_continuation(double value);
std::map<NodePair, double> clip_continuation(const std::map<NodePair, double>& values);

}  // namespace searchspace

template <>
struct std::hash<searchspace::NodeId> {
  std::size_t operator()(searchspace::NodeId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
