#pragma once

#include <string>
#include <vector>

#include "searchspace/relation.hpp"

namespace searchspace::test {

inline NodeId id(std::size_t i) { return NodeId{static_cast<std::uint32_t>(i)}; }

inline CrispEnvelope envelope(std::size_t n, std::initializer_list<std::pair<int, int>> edges) {
  std::vector<NodePair> pairs;
  for (const auto& [f, g] : edges) pairs.emplace_back(id(f), id(g));
  return CrispEnvelope(n, pairs);
}

inline std::string fixture(const std::string& name) { return std::string(SEARCHSPACE_FIXTURE_DIR) + "/" + name; }

}  // namespace searchspace::test
