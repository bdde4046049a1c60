#include "searchspace/grid.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

#include <fmt/format.h>

#include "searchspace/error.hpp"

namespace searchspace {

void GridSpec::validate() const {
  if (n < 1) throw InputError(fmt::format("grid side N = {} must be positive", n));
  if (!contains(target)) {
    throw InputError(fmt::format("target {} lies outside the {}x{} board", cell_label(target), n, n));
  }
}

std::string cell_label(Cell c) { return fmt::format("({},{})", c.x, c.y); }

std::optional<Cell> parse_cell(std::string_view text) {
  text = trim_label(text);
  if (text.size() >= 2 && ((text.front() == '(' && text.back() == ')') ||
                           (text.front() == '[' && text.back() == ']'))) {
    text = text.substr(1, text.size() - 2);
  }
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) return std::nullopt;
  auto parse_int = [](std::string_view s) -> std::optional<int> {
    s = trim_label(s);
    if (s.empty()) return std::nullopt;
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
  };
  const auto x = parse_int(text.substr(0, comma));
  const auto y = parse_int(text.substr(comma + 1));
  if (!x || !y) return std::nullopt;
  return Cell{*x, *y};
}

int manhattan(Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

std::string_view move_name(Move m) {
  switch (m) {
    case Move::up: return "up";
    case Move::down: return "down";
    case Move::left: return "left";
    case Move::right: return "right";
  }
  return "?";
}

std::optional<Move> parse_move(std::string_view text) {
  std::string lower(trim_label(text));
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (const auto m : kMoves) {
    if (lower == move_name(m)) return m;
  }
  return std::nullopt;
}

Cell apply(Cell c, Move m) {
  switch (m) {
    case Move::up: return {c.x, c.y + 1};
    case Move::down: return {c.x, c.y - 1};
    case Move::left: return {c.x - 1, c.y};
    case Move::right: return {c.x + 1, c.y};
  }
  return c;
}

NodeTable grid_nodes(const GridSpec& spec) {
  spec.validate();
  NodeTable nodes;
  for (int x = 0; x < spec.n; ++x) {
    for (int y = 0; y < spec.n; ++y) nodes.intern(cell_label({x, y}));
  }
  return nodes;
}

namespace {

std::vector<Move> decreasing_moves(const GridSpec& spec, Cell c) {
  std::vector<Move> out;
  const int d = manhattan(c, spec.target);
  for (const auto m : kMoves) {
    const auto next = apply(c, m);
    if (spec.contains(next) && manhattan(next, spec.target) < d) out.push_back(m);
  }
  return out;
}

std::vector<Move> legal_moves(const GridSpec& spec, Cell c) {
  std::vector<Move> out;
  for (const auto m : kMoves) {
    if (spec.contains(apply(c, m))) out.push_back(m);
  }
  return out;
}

Move preferred_move(const GridSpec& spec, Cell c, AxisBias bias) {
  const int dx = spec.target.x - c.x;
  const int dy = spec.target.y - c.y;
  const Move along_x = dx > 0 ? Move::right : Move::left;
  const Move along_y = dy > 0 ? Move::up : Move::down;
  if (bias == AxisBias::x_first) return dx != 0 ? along_x : along_y;
  return dy != 0 ? along_y : along_x;
}

// splitmix64; the uniform conversion below is spelled out so draws do not
// depend on the standard library's distribution implementations.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class SampleStream {
 public:
  SampleStream(std::uint64_t root, std::uint64_t policy_seed, Cell cell, std::uint32_t sample) {
    state_ = mix(root);
    for (const std::uint64_t v : {policy_seed, static_cast<std::uint64_t>(cell.x),
                                  static_cast<std::uint64_t>(cell.y), std::uint64_t{sample}}) {
      state_ = mix(state_ ^ v);
    }
  }

  double uniform() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return static_cast<double>(mix(state_) >> 11) * 0x1.0p-53;
  }

  std::size_t pick(std::size_t count) {
    return std::min(count - 1, static_cast<std::size_t>(uniform() * static_cast<double>(count)));
  }

 private:
  std::uint64_t state_;
};

}  // namespace

CrispEnvelope monotone_lattice_envelope(const GridSpec& spec) {
  spec.validate();
  std::vector<NodePair> edges;
  for (int x = 0; x < spec.n; ++x) {
    for (int y = 0; y < spec.n; ++y) {
      const Cell c{x, y};
      for (const auto m : decreasing_moves(spec, c)) edges.emplace_back(spec.id_of(c), spec.id_of(apply(c, m)));
    }
  }
  return CrispEnvelope(spec.cell_count(), edges);
}

void PolicyParams::validate() const {
  if (!(greediness >= 0.0 && greediness <= 1.0) || !(noise >= 0.0 && noise <= 1.0) ||
      greediness + noise > 1.0 + 1e-12) {
    throw InputError(fmt::format(
        "policy '{}': greediness {} and noise {} must lie in [0,1] with sum <= 1", name, greediness,
        noise));
  }
}

std::vector<PolicyParams> default_roster(std::size_t count, double noise) {
  std::vector<PolicyParams> roster;
  roster.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double spread = count > 1 ? static_cast<double>(i) / static_cast<double>(count - 1) : 0.0;
    PolicyParams p;
    p.name = fmt::format("policy-{}", i);
    p.axis_bias = i % 2 == 0 ? AxisBias::x_first : AxisBias::y_first;
    p.noise = noise;
    p.greediness = std::min(0.95 - 0.45 * spread, 1.0 - noise);
    p.seed = i;
    roster.push_back(std::move(p));
  }
  return roster;
}

GridSimulation simulate_grid_policies(const GridSpec& spec,
                                      const std::vector<PolicyParams>& policies, std::uint32_t m,
                                      std::uint64_t root_seed) {
  spec.validate();
  if (policies.empty()) throw InputError("at least one policy is required");
  if (m == 0) throw InputError("samples per cell m must be positive");
  for (const auto& p : policies) p.validate();

  GridSimulation sim;
  const auto target = cell_label(spec.target);
  for (const auto& policy : policies) {
    for (int x = 0; x < spec.n; ++x) {
      for (int y = 0; y < spec.n; ++y) {
        const Cell cell{x, y};
        if (cell == spec.target) continue;
        const auto greedy = decreasing_moves(spec, cell);
        const auto legal = legal_moves(spec, cell);
        for (std::uint32_t s = 0; s < m; ++s) {
          SampleStream rng(root_seed, policy.seed, cell, s);
          const double u = rng.uniform();
          Move move;
          if (u < policy.noise) {
            move = legal[rng.pick(legal.size())];
          } else if (u < policy.noise + policy.greediness) {
            move = preferred_move(spec, cell, policy.axis_bias);
          } else {
            move = greedy[rng.pick(greedy.size())];
          }
          sim.transcript.push_back(
              {policy.name, cell_label(cell), target, s, cell_label(apply(cell, move))});
        }
      }
    }
  }
  sim.result = kernel_from_transcripts(sim.transcript, m, &spec);
  return sim;
}

}  // namespace searchspace
