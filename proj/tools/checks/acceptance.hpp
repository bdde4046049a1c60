#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "searchspace/io.hpp"

namespace searchspace::acceptance {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the CLI in-process and returns its exit status.
using CliRunner = std::function<int(const std::vector<std::string>& args)>;

struct Options {
  bool quick = false;  // fewer random fixtures
  std::uint64_t seed = 0;
  /// Replaces the built-in N=5, t=(3,4) monotone-lattice envelope.
  std::optional<EnvelopeDocument> lattice_override;
  /// Needed by the determinism criterion; it is skipped (and fails) without one.
  CliRunner cli;
};

inline constexpr int kCriterionCount = 11;

/// Runs criterion `id` (1-based).
CheckResult run_criterion(int id, const Options& options);
std::vector<CheckResult> run_all(const Options& options);

/// "[PASS]  3  <name>  <seconds> s  <detail>"
std::string format_result(const CheckResult& result);

}  // namespace searchspace::acceptance
