#include "searchspace/relation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "searchspace/error.hpp"

namespace searchspace {

std::string_view trim_label(std::string_view label) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto first = label.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = label.find_last_not_of(kSpace);
  return label.substr(first, last - first + 1);
}

NodeId NodeTable::intern(std::string_view label) {
  const std::string key(trim_label(label));
  if (key.empty()) throw InputError("empty state label");
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  if (labels_.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw InputError("node table full");
  }
  const NodeId id{static_cast<std::uint32_t>(labels_.size())};
  labels_.push_back(key);
  index_.emplace(key, id);
  return id;
}

std::optional<NodeId> NodeTable::find(std::string_view label) const {
  const auto it = index_.find(std::string(trim_label(label)));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeId NodeTable::at(std::string_view label) const {
  if (auto id = find(label)) return *id;
  throw InputError(fmt::format("unknown state label '{}'", trim_label(label)));
}

// ---------------------------------------------------------------------------

FuzzyKernel::FuzzyKernel(std::size_t node_count) : offsets_(node_count + 1, 0) {}

std::span<const WeightedEdge> FuzzyKernel::row(NodeId from) const {
  const auto i = from.index();
  return {edges_.data() + offsets_.at(i), offsets_.at(i + 1) - offsets_[i]};
}

double FuzzyKernel::mu(NodeId from, NodeId to) const {
  if (from.index() >= node_count()) return 0.0;
  const auto r = row(from);
  const auto it = std::lower_bound(r.begin(), r.end(), to,
                                   [](const WeightedEdge& e, NodeId id) { return e.to < id; });
  return (it != r.end() && it->to == to) ? it->mu : 0.0;
}

std::vector<EdgeTriplet> FuzzyKernel::edges() const {
  std::vector<EdgeTriplet> out;
  out.reserve(edges_.size());
  for (std::size_t f = 0; f < node_count(); ++f) {
    const NodeId from{static_cast<std::uint32_t>(f)};
    for (const auto& e : row(from)) out.push_back({from, e.to, e.mu});
  }
  return out;
}

double FuzzyKernel::max_row_sum() const {
  double best = 0.0;
  for (std::size_t f = 0; f < node_count(); ++f) {
    double sum = 0.0;
    for (const auto& e : row(NodeId{static_cast<std::uint32_t>(f)})) sum += e.mu;
    best = std::max(best, sum);
  }
  return best;
}

KernelBuilder::KernelBuilder(std::size_t node_count) : node_count_(node_count) {}

KernelBuilder& KernelBuilder::add(NodeId from, NodeId to, double mu) {
  if (from.index() >= node_count_ || to.index() >= node_count_) {
    throw StructuralError(fmt::format("edge ({},{}) outside node universe of size {}",
                                      from.value, to.value, node_count_));
  }
  if (!(mu >= 0.0 && mu <= 1.0)) {
    throw InputError(fmt::format("membership {} for edge ({},{}) outside [0,1]", mu,
                                 from.value, to.value));
  }
  if (mu < kMuEpsilon) return *this;
  const auto [it, inserted] = entries_.emplace(std::pair{from.value, to.value}, mu);
  if (!inserted && it->second != mu) {
    throw StructuralError(fmt::format("duplicate edge ({},{}) with differing weights {} and {}",
                                      from.value, to.value, it->second, mu));
  }
  return *this;
}

FuzzyKernel KernelBuilder::build() && {
  FuzzyKernel k(node_count_);
  k.edges_.reserve(entries_.size());
  // entries_ is ordered by (from, to), which is exactly CSR order.
  for (const auto& [key, mu] : entries_) {
    k.offsets_[key.first + 1]++;
    k.edges_.push_back({NodeId{key.second}, mu});
  }
  for (std::size_t i = 0; i < node_count_; ++i) k.offsets_[i + 1] += k.offsets_[i];
  entries_.clear();
  return k;
}

// ---------------------------------------------------------------------------

CrispEnvelope::CrispEnvelope(std::size_t node_count) : offsets_(node_count + 1, 0) {}

CrispEnvelope::CrispEnvelope(std::size_t node_count, std::span<const NodePair> edges)
    : offsets_(node_count + 1, 0) {
  std::vector<NodePair> sorted(edges.begin(), edges.end());
  for (const auto& [f, g] : sorted) {
    if (f.index() >= node_count || g.index() >= node_count) {
      throw StructuralError(fmt::format("edge ({},{}) outside node universe of size {}", f.value,
                                        g.value, node_count));
    }
  }
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  targets_.reserve(sorted.size());
  for (const auto& [f, g] : sorted) {
    offsets_[f.index() + 1]++;
    targets_.push_back(g);
  }
  for (std::size_t i = 0; i < node_count; ++i) offsets_[i + 1] += offsets_[i];
}

std::span<const NodeId> CrispEnvelope::row(NodeId from) const {
  const auto i = from.index();
  return {targets_.data() + offsets_.at(i), offsets_.at(i + 1) - offsets_[i]};
}

bool CrispEnvelope::has_edge(NodeId from, NodeId to) const {
  if (from.index() >= node_count()) return false;
  const auto r = row(from);
  return std::binary_search(r.begin(), r.end(), to);
}

std::vector<NodePair> CrispEnvelope::edges() const {
  std::vector<NodePair> out;
  out.reserve(targets_.size());
  for (std::size_t f = 0; f < node_count(); ++f) {
    const NodeId from{static_cast<std::uint32_t>(f)};
    for (const auto to : row(from)) out.emplace_back(from, to);
  }
  return out;
}

FuzzyKernel CrispEnvelope::as_kernel() const {
  KernelBuilder b(node_count());
  for (const auto& [f, g] : edges()) b.add(f, g, 1.0);
  return std::move(b).build();
}

CrispEnvelope CrispEnvelope::transposed() const {
  auto e = edges();
  for (auto& [f, g] : e) std::swap(f, g);
  return CrispEnvelope(node_count(), e);
}

CrispEnvelope CrispEnvelope::without_edges(std::span<const NodePair> removed) const {
  std::vector<NodePair> drop(removed.begin(), removed.end());
  std::sort(drop.begin(), drop.end());
  std::vector<NodePair> kept;
  for (const auto& e : edges()) {
    if (!std::binary_search(drop.begin(), drop.end(), e)) kept.push_back(e);
  }
  return CrispEnvelope(node_count(), kept);
}

bool SearchTrajectory::valid_in(const FuzzyKernel& kernel) const {
  if (nodes.empty()) return false;
  for (const auto n : nodes) {
    if (n.index() >= kernel.node_count()) return false;
  }
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (!kernel.has_edge(nodes[i], nodes[i + 1])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

CrispEnvelope support_envelope(const FuzzyKernel& kernel) {
  std::vector<NodePair> e;
  e.reserve(kernel.edge_count());
  for (const auto& t : kernel.edges()) {
    if (t.mu > 0.0) e.emplace_back(t.from, t.to);
  }
  return CrispEnvelope(kernel.node_count(), e);
}

DominationResult check_safety_domination(const FuzzyKernel& kernel,
                                         const CrispEnvelope& envelope) {
  if (kernel.node_count() != envelope.node_count()) {
    throw StructuralError(fmt::format("kernel has {} nodes but envelope has {}",
                                      kernel.node_count(), envelope.node_count()));
  }
  for (const auto& t : kernel.edges()) {
    if (!envelope.has_edge(t.from, t.to)) return {false, NodePair{t.from, t.to}};
  }
  return {};
}

double clip_continuation(double value) {
  if (std::isnan(value) || value < 0.0) {
    throw ContractError(fmt::format("continuation value {} is not a non-negative number", value));
  }
  return std::min(1.0, value);
}

std::map<NodePair, double> clip_continuation(const std::map<NodePair, double>& values) {
  std::map<NodePair, double> out;
  for (const auto& [pair, v] : values) out.emplace(pair, clip_continuation(v));
  return out;
}

}  // namespace searchspace
