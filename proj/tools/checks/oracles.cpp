#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace searchspace::oracle {

namespace {

void walk(const CrispEnvelope& envelope, NodeId at, std::size_t depth, std::size_t max_length,
          std::vector<std::vector<std::uint64_t>>& out) {
  out[depth][at.index()]++;
  if (depth == max_length) return;
  for (const auto next : envelope.row(at)) walk(envelope, next, depth + 1, max_length, out);
}

NodeId id(std::size_t i) { return NodeId{static_cast<std::uint32_t>(i)}; }

}  // namespace

std::vector<std::vector<std::uint64_t>> enumerate_walks(const CrispEnvelope& envelope, NodeId f,
                                                        std::size_t max_length) {
  std::vector<std::vector<std::uint64_t>> out(max_length + 1,
                                              std::vector<std::uint64_t>(envelope.node_count(), 0));
  walk(envelope, f, 0, max_length, out);
  return out;
}

std::uint64_t count_walks(const CrispEnvelope& envelope, NodeId f, NodeId g, std::size_t length) {
  return enumerate_walks(envelope, f, length)[length][g.index()];
}

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

CrispEnvelope random_digraph(std::size_t n, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(density);
  std::vector<NodePair> edges;
  for (std::size_t f = 0; f < n; ++f) {
    for (std::size_t g = 0; g < n; ++g) {
      if (coin(rng)) edges.emplace_back(id(f), id(g));
    }
  }
  return CrispEnvelope(n, edges);
}

CrispEnvelope random_dag(std::size_t n, double density, std::mt19937_64& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::bernoulli_distribution coin(density);
  std::vector<NodePair> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (coin(rng)) edges.emplace_back(id(perm[i]), id(perm[j]));
    }
  }
  return CrispEnvelope(n, edges);
}

FuzzyKernel random_fuzzy_kernel(std::size_t n, double density, bool dag, std::mt19937_64& rng) {
  const auto shape = dag ? random_dag(n, density, rng) : random_digraph(n, density, rng);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  KernelBuilder b(n);
  for (const auto& [f, g] : shape.edges()) b.add(f, g, 1.0 - weight(rng));  // (0,1]
  return std::move(b).build();
}

CrispEnvelope disjoint_paths(std::size_t k, std::size_t n) {
  std::vector<NodePair> edges;
  std::size_t next = 2;
  for (std::size_t path = 0; path < k; ++path) {
    NodeId prev = id(0);
    for (std::size_t step = 1; step < n; ++step) {
      const auto mid = id(next++);
      edges.emplace_back(prev, mid);
      prev = mid;
    }
    edges.emplace_back(prev, id(1));
  }
  return CrispEnvelope(next, edges);
}

CrispEnvelope two_cycle() {
  const std::vector<NodePair> edges{{id(0), id(1)}, {id(1), id(0)}};
  return CrispEnvelope(2, edges);
}

double disjoint_paths_critical(std::size_t k, std::size_t n) {
  return std::pow(static_cast<double>(k), -1.0 / static_cast<double>(n));
}

double two_cycle_critical() { return (std::sqrt(5.0) - 1.0) / 2.0; }

}  // namespace searchspace::oracle
