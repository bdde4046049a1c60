#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "searchspace/ingest.hpp"
#include "searchspace/relation.hpp"

namespace searchspace {

struct Cell {
  int x = 0;
  int y = 0;
  friend constexpr bool operator==(Cell, Cell) = default;
};

/// Board G_N = {0..N-1}^2 with a target cell.
struct GridSpec {
  int n = 5;
  Cell target{3, 4};

  /// Throws InputError when N < 1 or the target is off the board.
  void validate() const;
  bool contains(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < n && c.y < n; }
  std::size_t cell_count() const { return static_cast<std::size_t>(n) * n; }
  NodeId id_of(Cell c) const { return NodeId{static_cast<std::uint32_t>(c.x * n + c.y)}; }
  Cell cell_of(NodeId id) const { return {static_cast<int>(id.value) / n, static_cast<int>(id.value) % n}; }
};

/// The three board configurations used for the grid experiments.
inline constexpr std::array<GridSpec, 3> kStandardGrids{{
    {3, {1, 2}},
    {5, {3, 4}},
    {8, {6, 7}},
}};

std::string cell_label(Cell c);  // "(x,y)"
/// Parses "(x,y)", "[x, y]" or "x,y".
std::optional<Cell> parse_cell(std::string_view text);
int manhattan(Cell a, Cell b);

enum class Move { up, down, left, right };
inline constexpr std::array<Move, 4> kMoves{Move::up, Move::down, Move::left, Move::right};
std::string_view move_name(Move m);
std::optional<Move> parse_move(std::string_view text);
Cell apply(Cell c, Move m);  // up: y+1, right: x+1

/// Node table with every cell interned in id order.
NodeTable grid_nodes(const GridSpec& spec);

/// Every legal unit step that strictly decreases the Manhattan distance to the
/// target. The target has no outgoing edges.
CrispEnvelope monotone_lattice_envelope(const GridSpec& spec);

enum class AxisBias { x_first, y_first };

/// Synthetic stand-in for one model. Per sample: with probability `noise` a
/// uniformly random legal move; otherwise with probability `greediness` the
/// bias-preferred distance-decreasing move; otherwise a uniformly random
/// distance-decreasing move.
struct PolicyParams {
  std::string name;
  AxisBias axis_bias = AxisBias::x_first;
  double greediness = 1.0;
  double noise = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// `count` policies alternating axis bias with greediness spread over
/// [0.5, 0.95], each with the given noise and a seed derived from its index.
std::vector<PolicyParams> default_roster(std::size_t count = 8, double noise = 0.0);

struct GridSimulation {
  std::vector<TranscriptRecord> transcript;
  TranscriptKernel result;
};

/// Samples each policy m times at every non-target cell and aggregates the
/// strict-majority modes. Bit-reproducible for a given root seed; a policy's
/// draws depend only on (root_seed, policy.seed, cell, sample).
GridSimulation simulate_grid_policies(const GridSpec& spec,
                                      const std::vector<PolicyParams>& policies,
                                      std::uint32_t m = 5, std::uint64_t root_seed = 0);

}  // namespace searchspace
