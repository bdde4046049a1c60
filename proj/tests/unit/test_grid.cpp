#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "searchspace/error.hpp"
#include "searchspace/grid.hpp"

using namespace searchspace;

TEST_CASE("cell labels and moves") {
  CHECK(cell_label({3, 4}) == "(3,4)");
  CHECK(parse_cell("(3,4)") == Cell{3, 4});
  CHECK(parse_cell("[3, 4]") == Cell{3, 4});
  CHECK(parse_cell(" 3,4 ") == Cell{3, 4});
  CHECK_FALSE(parse_cell("(3;4)").has_value());
  CHECK_FALSE(parse_cell("up").has_value());
  CHECK(apply({1, 1}, Move::up) == Cell{1, 2});
  CHECK(apply({1, 1}, Move::right) == Cell{2, 1});
  CHECK(parse_move(" Left ") == Move::left);
  CHECK_FALSE(parse_move("jump").has_value());
  CHECK(manhattan({0, 0}, {3, 4}) == 7);
}

TEST_CASE("board validation") {
  CHECK_THROWS_AS((GridSpec{5, {5, 0}}.validate()), InputError);
  CHECK_THROWS_AS((GridSpec{0, {0, 0}}.validate()), InputError);
  CHECK_NOTHROW((GridSpec{5, {3, 4}}.validate()));
  const GridSpec g{5, {3, 4}};
  CHECK(g.id_of({2, 3}).value == 13);
  CHECK(g.cell_of(NodeId{13}) == Cell{2, 3});
  CHECK(grid_nodes(g).label(NodeId{13}) == "(2,3)");
  CHECK_THROWS_AS(simulate_grid_policies({5, {7, 7}}, default_roster()), InputError);
}

TEST_CASE("monotone lattice envelope") {
  for (const auto& spec : kStandardGrids) {
    const auto env = monotone_lattice_envelope(spec);
    CHECK(env.node_count() == spec.cell_count());
    CHECK(env.row(spec.id_of(spec.target)).empty());
    std::size_t expected_edges = 0;
    for (int x = 0; x < spec.n; ++x) {
      for (int y = 0; y < spec.n; ++y) expected_edges += (x != spec.target.x) + (y != spec.target.y);
    }
    CHECK(env.edge_count() == expected_edges);
    for (const auto& [f, g] : env.edges()) {
      CHECK(manhattan(spec.cell_of(g), spec.target) == manhattan(spec.cell_of(f), spec.target) - 1);
      CHECK(manhattan(spec.cell_of(f), spec.cell_of(g)) == 1);
    }
  }
}

TEST_CASE("eight policies give weights in multiples of 1/8") {
  const GridSpec spec{3, {1, 2}};
  const auto sim = simulate_grid_policies(spec, default_roster(8), 5, 0);
  CHECK(sim.result.model_count == 8);
  CHECK(sim.transcript.size() == 8 * 5 * (spec.cell_count() - 1));
  for (const auto& e : sim.result.kernel.edges()) {
    const double scaled = e.mu * 8.0;
    CHECK(std::abs(scaled - std::round(scaled)) < 1e-12);
  }
}

TEST_CASE("a fully greedy noiseless policy is deterministic") {
  const GridSpec spec{5, {3, 4}};
  const auto sim = simulate_grid_policies(spec, {PolicyParams{"greedy", AxisBias::x_first, 1.0, 0.0, 0}}, 5, 3);
  CHECK(sim.result.kernel.edge_count() == spec.cell_count() - 1);
  for (std::uint32_t c = 0; c < spec.cell_count(); ++c) {
    const auto row = sim.result.kernel.row(NodeId{c});
    if (spec.cell_of(NodeId{c}) == spec.target) {
      CHECK(row.empty());
    } else {
      REQUIRE(row.size() == 1);
      CHECK(row[0].mu == 1.0);
    }
  }
}

TEST_CASE("noiseless simulation stays inside the monotone lattice") {
  for (const auto& spec : kStandardGrids) {
    const auto sim = simulate_grid_policies(spec, default_roster(8), 5, 11);
    const auto lattice = monotone_lattice_envelope(spec);
    CHECK(sim.result.violations.empty());
    CHECK(check_safety_domination(sim.result.kernel, lattice).dominated);
    for (const auto& [f, g] : support_envelope(sim.result.kernel).edges()) {
      CHECK(manhattan(spec.cell_of(g), spec.target) < manhattan(spec.cell_of(f), spec.target));
    }
  }
}

TEST_CASE("noise breaks unidirectionality") {
  const GridSpec spec{5, {3, 4}};
  const auto sim = simulate_grid_policies(spec, default_roster(8, 1.0), 1, 0);
  CHECK_FALSE(check_safety_domination(sim.result.kernel, monotone_lattice_envelope(spec)).dominated);
}

TEST_CASE("simulation is reproducible and policies draw independently") {
  const GridSpec spec{5, {3, 4}};
  const auto roster = default_roster(8, 0.3);
  const auto a = simulate_grid_policies(spec, roster, 5, 7);
  const auto b = simulate_grid_policies(spec, roster, 5, 7);
  REQUIRE(a.transcript.size() == b.transcript.size());
  for (std::size_t i = 0; i < a.transcript.size(); ++i) CHECK(a.transcript[i].decision == b.transcript[i].decision);
  CHECK(a.result.kernel.edges().size() == b.result.kernel.edges().size());

  // Dropping the last policy leaves the others' samples untouched.
  const std::vector<PolicyParams> fewer(roster.begin(), roster.end() - 1);
  const auto c = simulate_grid_policies(spec, fewer, 5, 7);
  std::size_t compared = 0;
  for (const auto& r : c.transcript) {
    for (const auto& s : a.transcript) {
      if (s.model == r.model && s.state == r.state && s.sample_index == r.sample_index) {
        CHECK(s.decision == r.decision);
        ++compared;
      }
    }
  }
  CHECK(compared == c.transcript.size());
}

TEST_CASE("default roster") {
  const auto r = default_roster(8, 0.1);
  REQUIRE(r.size() == 8);
  CHECK(r[0].greediness == doctest::Approx(0.9));  // capped at 1 - noise
  CHECK(r[7].greediness == doctest::Approx(0.5));
  CHECK(r[0].axis_bias != r[1].axis_bias);
  for (const auto& p : r) CHECK_NOTHROW(p.validate());
  CHECK_THROWS_AS((PolicyParams{"bad", AxisBias::x_first, 1.5, 0.0, 0}.validate()), InputError);
}
