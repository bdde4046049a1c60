#include <doctest.h>

#include <cmath>
#include <limits>
#include <unordered_set>

#include <fmt/format.h>

#include "helpers.hpp"
#include "searchspace/error.hpp"
#include "searchspace/relation.hpp"

using namespace searchspace;
using searchspace::test::envelope;
using searchspace::test::id;

TEST_CASE("intern is idempotent and contiguous") {
  NodeTable t;
  CHECK(t.intern("(0,0)") == t.intern("(0,0)"));
  NodeTable u;
  CHECK(u.intern("a").value == 0);
  CHECK(u.intern("b").value == 1);
  CHECK(u.intern("  a ") == id(0));
  CHECK(u.label(id(1)) == "b");
  CHECK(u.size() == 2);
}

TEST_CASE("interning 3349 distinct labels gives 3349 ids") {
  NodeTable t;
  for (int i = 0; i < 3349; ++i) CHECK(t.intern(fmt::format("expr-{}", i)).value == static_cast<std::uint32_t>(i));
  for (int i = 0; i < 3349; ++i) t.intern(fmt::format("expr-{}", i));
  CHECK(t.size() == 3349);
}

TEST_CASE("empty labels and unknown lookups are input errors") {
  NodeTable t;
  CHECK_THROWS_AS(t.intern(""), InputError);
  CHECK_THROWS_AS(t.intern("   \t"), InputError);
  CHECK_THROWS_AS(t.at("missing"), InputError);
  CHECK_FALSE(t.find("missing").has_value());
}

TEST_CASE("kernel builder validates weights and duplicates") {
  KernelBuilder b(3);
  b.add(id(0), id(1), 0.25).add(id(0), id(1), 0.25).add(id(1), id(2), 1e-13);
  CHECK_THROWS_AS(b.add(id(0), id(1), 0.5), StructuralError);
  CHECK_THROWS_AS(b.add(id(0), id(3), 0.5), StructuralError);
  CHECK_THROWS_AS(b.add(id(0), id(2), 1.5), InputError);
  CHECK_THROWS_AS(b.add(id(0), id(2), -0.1), InputError);
  const auto k = std::move(b).build();
  CHECK(k.edge_count() == 1);  // the sub-epsilon weight was dropped
  CHECK(k.mu(id(0), id(1)) == 0.25);
  CHECK(k.mu(id(1), id(2)) == 0.0);
}

TEST_CASE("support envelope") {
  KernelBuilder b(3);
  b.add(id(0), id(1), 0.25).add(id(1), id(2), 1.0);
  const auto env = support_envelope(std::move(b).build());
  CHECK(env == envelope(3, {{0, 1}, {1, 2}}));
  CHECK(support_envelope(FuzzyKernel(0)).edge_count() == 0);
  CHECK(support_envelope(FuzzyKernel(4)).node_count() == 4);
}

TEST_CASE("crisp envelope construction") {
  const auto env = envelope(3, {{0, 2}, {0, 1}, {0, 2}});
  CHECK(env.edge_count() == 2);
  REQUIRE(env.row(id(0)).size() == 2);
  CHECK(env.row(id(0))[0] == id(1));  // sorted
  CHECK(env.transposed() == envelope(3, {{2, 0}, {1, 0}}));
  const std::vector<NodePair> drop{{id(0), id(1)}, {id(2), id(1)}};
  CHECK(env.without_edges(drop) == envelope(3, {{0, 2}}));
  CHECK(env.as_kernel().mu(id(0), id(2)) == 1.0);
}

TEST_CASE("safety domination") {
  KernelBuilder b(3);
  b.add(id(0), id(1), 0.5).add(id(1), id(2), 0.3);
  const auto k = std::move(b).build();
  CHECK(check_safety_domination(k, support_envelope(k)).dominated);

  const auto r = check_safety_domination(k, envelope(3, {{1, 2}}));
  CHECK_FALSE(r.dominated);
  REQUIRE(r.violation.has_value());
  CHECK(*r.violation == NodePair{id(0), id(1)});

  CHECK_THROWS_AS(check_safety_domination(k, envelope(2, {})), StructuralError);
}

TEST_CASE("clip continuation") {
  CHECK(clip_continuation(3.7) == 1.0);
  CHECK(clip_continuation(0.4) == 0.4);
  CHECK(clip_continuation(1.0) == 1.0);
  CHECK(clip_continuation(std::numeric_limits<double>::infinity()) == 1.0);
  CHECK_THROWS_AS(clip_continuation(-0.1), ContractError);
  CHECK_THROWS_AS(clip_continuation(std::nan("")), ContractError);
  const std::map<NodePair, double> values{{{id(0), id(0)}, 1.0}, {{id(0), id(1)}, 2.5}, {{id(1), id(0)}, 0.2}};
  const auto clipped = clip_continuation(values);
  CHECK(clipped.at({id(0), id(0)}) == 1.0);
  CHECK(clipped.at({id(0), id(1)}) == 1.0);
  CHECK(clipped.at({id(1), id(0)}) == 0.2);
}

TEST_CASE("search trajectories follow kernel edges") {
  const auto k = envelope(3, {{0, 1}, {1, 2}}).as_kernel();
  CHECK(SearchTrajectory{{id(0), id(1), id(2)}}.valid_in(k));
  CHECK(SearchTrajectory{{id(0), id(1), id(2)}}.length() == 2);
  CHECK_FALSE(SearchTrajectory{{id(0), id(2)}}.valid_in(k));
  CHECK(SearchTrajectory{{id(1)}}.valid_in(k));
}

TEST_CASE("node ids hash by value") {
  std::unordered_set<NodeId> s{id(1), id(1), id(2)};
  CHECK(s.size() == 2);
}
