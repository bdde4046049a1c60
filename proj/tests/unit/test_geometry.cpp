#include <doctest.h>

#include <algorithm>
#include <random>

#include <fmt/format.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "searchspace/geometry.hpp"
#include "searchspace/grid.hpp"

using namespace searchspace;
using searchspace::test::envelope;
using searchspace::test::id;

namespace {

const GridSpec kLattice{5, {3, 4}};

/// 0 -> 1 -> 2 -> 0 ring of k nodes.
CrispEnvelope ring(std::size_t k) {
  std::vector<NodePair> e;
  for (std::size_t i = 0; i < k; ++i) e.emplace_back(id(i), id((i + 1) % k));
  return CrispEnvelope(k, e);
}

}  // namespace

TEST_CASE("shortest distance") {
  const auto lattice = monotone_lattice_envelope(kLattice);
  CHECK(shortest_distance(lattice, id(7), id(7)) == 0u);
  CHECK(shortest_distance(lattice, kLattice.id_of({0, 0}), kLattice.id_of({3, 4})) == 7u);
  const auto isolated = envelope(3, {{0, 1}});
  CHECK_FALSE(shortest_distance(isolated, id(0), id(2)).has_value());
  CHECK_FALSE(shortest_distance(lattice, kLattice.id_of({3, 4}), kLattice.id_of({0, 0})).has_value());
}

TEST_CASE("path counts") {
  const auto lattice = monotone_lattice_envelope(kLattice);
  const auto f = kLattice.id_of({0, 0}), g = kLattice.id_of({3, 4});
  const auto table = path_counts(lattice, f, g, 10);
  CHECK(table.at(7) == 35);
  CHECK(count_shortest_paths(lattice, f, g) == 35);
  for (std::size_t n = 0; n <= 10; ++n) {
    if (n != 7) CHECK(table.at(n) == 0);
  }
  CHECK(oracle::count_walks(lattice, f, g, 7) == 35);

  const auto same = path_counts(lattice, f, f, 3);
  CHECK(same.at(0) == 1);
  CHECK(path_counts(lattice, f, g, 0).at(0) == 0);

  const auto cycle = oracle::two_cycle();
  const auto c = path_counts(cycle, id(0), id(1), 9);
  for (std::size_t n = 0; n <= 9; ++n) CHECK(c.at(n) == (n % 2 == 1 ? 1 : 0));
}

TEST_CASE("path counts are capped and exact beyond 64 bits") {
  const auto cycle = oracle::two_cycle();
  const auto capped = path_counts(cycle, id(0), id(1), 100);
  CHECK(capped.truncated);
  CHECK(capped.max_length == kDefaultPathLengthCap);
  CHECK(capped.counts.size() == kDefaultPathLengthCap + 1);

  // A complete digraph with self-loops on 20 nodes has 20^(n-1) walks of length n.
  std::vector<NodePair> all;
  for (std::size_t a = 0; a < 20; ++a)
    for (std::size_t b = 0; b < 20; ++b) all.emplace_back(id(a), id(b));
  const CrispEnvelope complete(20, all);
  const auto t = path_counts(complete, id(0), id(1), 30);
  BigCount expected = 1;
  for (int i = 0; i < 29; ++i) expected *= 20;
  CHECK(t.at(30) == expected);
  CHECK(expected > BigCount(std::numeric_limits<std::uint64_t>::max()));
}

TEST_CASE("dynamic programming agrees with walk enumeration") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto env = oracle::random_digraph(6, 0.35, rng);
    for (std::size_t f = 0; f < 6; ++f) {
      const auto dp = walk_counts_from(env, id(f), 5);
      const auto brute = oracle::enumerate_walks(env, id(f), 5);
      for (std::size_t n = 0; n <= 5; ++n)
        for (std::size_t g = 0; g < 6; ++g) CHECK(dp[n][g] == brute[n][g]);
      for (std::size_t g = 0; g < 6; ++g) {
        const auto d = shortest_distance(env, id(f), id(g));
        const auto table = path_counts(env, id(f), id(g), 5);
        // Counts below d0 vanish; N_{d0} is the shortest-path count.
        for (std::size_t n = 0; n <= 5 && (!d || n < *d); ++n) CHECK(table.at(n) == 0);
        if (d && *d <= 5) CHECK(table.at(*d) == count_shortest_paths(env, id(f), id(g)));
      }
    }
  }
}

TEST_CASE("reachability and topological order") {
  const auto env = envelope(5, {{0, 1}, {1, 2}, {3, 2}});
  const auto fwd = forward_reachable(env, id(0));
  CHECK(std::vector<bool>(fwd.begin(), fwd.end()) == std::vector<bool>{true, true, true, false, false});
  const auto bwd = backward_reachable(env, id(2));
  CHECK(std::vector<bool>(bwd.begin(), bwd.end()) == std::vector<bool>{true, true, true, true, false});
  const auto order = topological_order(env);
  REQUIRE(order.has_value());
  auto pos = [&](int n) { return std::find(order->begin(), order->end(), id(n)) - order->begin(); };
  CHECK(pos(0) < pos(1));
  CHECK(pos(3) < pos(2));
  CHECK_FALSE(is_acyclic(envelope(1, {{0, 0}})));
  CHECK_FALSE(topological_order(ring(3)).has_value());
}

TEST_CASE("condensation") {
  SUBCASE("DAG has no supernodes") {
    std::mt19937_64 rng(1);
    const auto c = condense(oracle::random_dag(12, 0.4, rng));
    CHECK(c.supernode_count() == 0);
    CHECK(c.components.size() == 12);
  }
  SUBCASE("one 2-cycle among 10 nodes") {
    const auto c = condense(envelope(10, {{0, 1}, {1, 2}, {2, 3}, {3, 2}, {3, 4}, {5, 6}, {6, 7}, {8, 9}}));
    CHECK(c.supernode_count() == 1);
    CHECK(c.nodes_in_supernodes() == 2);
    CHECK(c.components.size() == 9);
    CHECK(c.component_of[2] == c.component_of[3]);
  }
  SUBCASE("a 6-node strongly connected cluster with 8 internal edges") {
    const auto env = envelope(8, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {2, 0}, {5, 3}, {6, 0}, {5, 7}});
    const auto c = condense(env);
    CHECK(c.supernode_count() == 1);
    CHECK(c.nodes_in_supernodes() == 6);
  }
  SUBCASE("a self-loop is a supernode") {
    const auto c = condense(envelope(2, {{0, 0}, {0, 1}}));
    CHECK(c.supernode_count() == 1);
    CHECK(c.nodes_in_supernodes() == 1);
  }
  SUBCASE("components partition the nodes and the DAG edges go forward") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
      const auto env = oracle::random_digraph(15, 0.15, rng);
      const auto c = condense(env);
      std::vector<int> seen(15, 0);
      for (std::size_t ci = 0; ci < c.components.size(); ++ci) {
        for (const auto n : c.components[ci]) {
          ++seen[n.index()];
          CHECK(c.component_of[n.index()] == ci);
        }
      }
      CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
      for (const auto& [a, b] : c.dag_edges) CHECK(a < b);
      for (const auto& [f, g] : env.edges()) {
        // Mutual reachability is exactly shared membership.
        const bool back = forward_reachable(env, g)[f.index()];
        CHECK(back == (c.component_of[f.index()] == c.component_of[g.index()]));
      }
    }
  }
}

TEST_CASE("eta sweep") {
  SUBCASE("DAG log is all zero") {
    LogAggregator agg;
    for (int i = 0; i < 20; ++i) {
      agg.add(fmt::format("s{}", i), fmt::format("s{}", i + 1), 3);
      agg.add(fmt::format("s{}", i), fmt::format("s{}", i + 2), 2);
    }
    const auto log = std::move(agg).take();
    for (const auto& pt : eta_sweep(log, {0.0, 0.1, 0.5, 0.9})) CHECK(pt.eta == 0.0);
  }
  SUBCASE("100-node DAG plus one planted 2-cycle") {
    LogAggregator agg;
    for (int i = 0; i < 99; ++i) {
      agg.add(fmt::format("d{}", i), fmt::format("d{}", i + 1), 50);
      if (i + 2 < 100) agg.add(fmt::format("d{}", i), fmt::format("d{}", i + 2), 50);
    }
    agg.add("u", "v", 30);
    agg.add("v", "u", 10);
    agg.add("u", "d0", 10);
    agg.add("v", "d0", 30);
    const auto log = std::move(agg).take();
    REQUIRE(log.nodes.size() == 102);
    const auto sweep = eta_sweep(log, {0.0, 0.2, 0.3}, EtaDenominator::all);
    CHECK(sweep[0].eta == doctest::Approx(2.0 / 102.0).epsilon(1e-15));
    CHECK(sweep[0].supernode_count == 1);
    CHECK(sweep[1].eta == doctest::Approx(2.0 / 102.0).epsilon(1e-15));
    CHECK(sweep[2].eta == 0.0);  // r(v,u) = 0.25 <= 0.3
  }
  SUBCASE("supernode counts never grow with p0") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> node(0, 29), weight(1, 5);
    for (int trial = 0; trial < 20; ++trial) {
      LogAggregator agg;
      for (int i = 0; i < 150; ++i) agg.add(fmt::format("n{}", node(rng)), fmt::format("n{}", node(rng)), weight(rng));
      const auto log = std::move(agg).take();
      std::vector<double> grid;
      for (int i = 0; i < 20; ++i) grid.push_back(0.05 * i);
      const auto all = eta_sweep(log, grid, EtaDenominator::all);
      for (std::size_t i = 1; i < all.size(); ++i) {
        CHECK(all[i].nodes_in_supernodes <= all[i - 1].nodes_in_supernodes);
        CHECK(all[i].eta <= all[i - 1].eta);
        CHECK(all[i].total_nodes == log.nodes.size());
      }
    }
  }
}

TEST_CASE("spectral radius bounds") {
  std::mt19937_64 rng(3);
  const auto dag = spectral_radius_bounds(oracle::random_fuzzy_kernel(10, 0.4, true, rng));
  CHECK(dag.is_nilpotent);
  CHECK(dag.lower == 0.0);

  const auto loop = spectral_radius_bounds(envelope(1, {{0, 0}}).as_kernel());
  CHECK(loop.upper == 1.0);
  CHECK(loop.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(loop.is_nilpotent);

  for (std::size_t k : {2, 3, 7}) {
    const auto b = spectral_radius_bounds(ring(k).as_kernel());
    CHECK(b.lower <= 1.0 + 1e-12);
    CHECK(b.scc_upper >= 1.0 - 1e-12);
    CHECK(b.scc_upper - b.lower <= 1e-6);
  }
  // Two disjoint 2-cycles joined by a bridge; rho = 1 while the row-sum bound is 2.
  const auto joined = spectral_radius_bounds(envelope(4, {{0, 1}, {1, 0}, {1, 2}, {2, 3}, {3, 2}}).as_kernel());
  CHECK(joined.upper == 2.0);
  CHECK(joined.scc_upper == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("epoch expansion") {
  const auto lattice = monotone_lattice_envelope(kLattice);
  const auto start = kLattice.id_of({0, 0}), target = kLattice.id_of({3, 4});
  CHECK(epoch_expansion(lattice, start, 0) == std::vector<NodeId>{start});
  const auto six = epoch_expansion(lattice, start, 6);
  const auto seven = epoch_expansion(lattice, start, 7);
  CHECK_FALSE(std::binary_search(six.begin(), six.end(), target));
  CHECK(std::binary_search(seven.begin(), seven.end(), target));

  const auto saturated = epoch_expansion(lattice, start, lattice.node_count());
  const auto reach = forward_reachable(lattice, start);
  CHECK(saturated.size() == static_cast<std::size_t>(std::count(reach.begin(), reach.end(), true)));
  CHECK(epoch_expansion(lattice, start, 100) == saturated);
  for (std::size_t e = 1; e < 9; ++e) {
    const auto prev = epoch_expansion(lattice, start, e - 1), next = epoch_expansion(lattice, start, e);
    CHECK(std::includes(next.begin(), next.end(), prev.begin(), prev.end()));
  }
}
