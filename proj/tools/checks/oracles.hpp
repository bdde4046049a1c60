#pragma once

// Brute-force reference computations and random fixtures. Nothing in here
// calls the dynamic-programming or solver code it is used to check.

#include <cstdint>
#include <random>
#include <vector>

#include "searchspace/grid.hpp"
#include "searchspace/relation.hpp"

namespace searchspace::oracle {

/// walks[n][g] = number of walks of length n from f to g, by depth-first
/// enumeration of every walk.
std::vector<std::vector<std::uint64_t>> enumerate_walks(const CrispEnvelope& envelope, NodeId f,
                                                        std::size_t max_length);

/// Number of walks of exactly `length` edges from f to g, enumerated.
std::uint64_t count_walks(const CrispEnvelope& envelope, NodeId f, NodeId g, std::size_t length);

/// C(n, k) by the multiplicative formula.
std::uint64_t binomial(unsigned n, unsigned k);

/// Each ordered pair (self-loops included) is an edge with probability `density`.
CrispEnvelope random_digraph(std::size_t n, double density, std::mt19937_64& rng);
/// Edges only go forward in a random permutation, so the result is acyclic.
CrispEnvelope random_dag(std::size_t n, double density, std::mt19937_64& rng);
/// Random weights in (0,1]; acyclic when `dag` is set.
FuzzyKernel random_fuzzy_kernel(std::size_t n, double density, bool dag, std::mt19937_64& rng);

/// k internally node-disjoint paths of n edges from node 0 to node 1.
CrispEnvelope disjoint_paths(std::size_t k, std::size_t n);
/// 0 -> 1 -> 0.
CrispEnvelope two_cycle();

/// p_c of P(p) = k p^n.
double disjoint_paths_critical(std::size_t k, std::size_t n);
/// Positive root of p^2 + p - 1 = 0.
double two_cycle_critical();

}  // namespace searchspace::oracle
