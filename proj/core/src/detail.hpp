#pragma once

// Internal helpers shared by geometry and coverage; not installed.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace searchspace::detail {

/// Square nonnegative matrix in CSR form over local indices.
struct LocalMatrix {
  std::size_t n = 0;
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> cols;
  std::vector<double> vals;

  std::size_t row_begin(std::size_t i) const { return offsets[i]; }
  std::size_t row_end(std::size_t i) const { return offsets[i + 1]; }
};

/// Iterative Tarjan. `successors(v, out)` appends the successors of v.
/// Components come out in reverse topological order (sinks first).
std::vector<std::vector<std::uint32_t>> strongly_connected_components(
    std::size_t n, const std::function<void(std::uint32_t, std::vector<std::uint32_t>&)>& successors);

/// Collatz-Wielandt bounds for an irreducible nonnegative matrix, from power
/// iteration on I + M started at the all-ones vector. `weights` is the
/// positive vector attaining `upper`: (M w)_i <= upper * w_i for all i.
struct PerronBounds {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> weights;
};

PerronBounds perron_bounds(const LocalMatrix& m, int iterations);

}  // namespace searchspace::detail
